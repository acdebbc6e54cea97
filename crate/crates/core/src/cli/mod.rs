//! Command-line orchestration: configuration, suites, reports.

mod suites;

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Parser;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use suites::run_suite;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Qpoly,
    Qrep,
    Plancherel,
    Weyl,
    Tw2,
    Azb,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Qpoly,
        Suite::Qrep,
        Suite::Plancherel,
        Suite::Weyl,
        Suite::Tw2,
        Suite::Azb,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Qpoly => "qpoly",
            Suite::Qrep => "qrep",
            Suite::Plancherel => "plancherel",
            Suite::Weyl => "weyl",
            Suite::Tw2 => "tw2",
            Suite::Azb => "azb",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s.trim())
            .ok_or_else(|| Error::Config(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(Error::Config(format!("unknown format '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub q: f64,
    /// Truncation `N`.
    pub dim: usize,
    /// Circle grid size `M`.
    pub grid: usize,
    /// az+b cutoff `K`.
    pub kcut: usize,
    pub tol_exact: f64,
    pub tol_trunc: f64,
    pub tol_grid: f64,
    pub seed: u64,
    pub suites: Vec<Suite>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            q: 0.5,
            dim: 64,
            grid: 8,
            kcut: 6,
            tol_exact: 1e-12,
            tol_trunc: 1e-9,
            tol_grid: 1e-3,
            seed: 42,
            suites: Suite::ALL.to_vec(),
            format: Format::Json,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.q != 0.0 && self.q.abs() < 1.0) {
            return bad(format!("q = {} must satisfy 0 < |q| < 1", self.q));
        }
        if self.dim < 2 {
            return bad(format!("dim = {} < 2", self.dim));
        }
        if self.grid < 2 || !self.grid.is_multiple_of(2) {
            return bad(format!("grid = {} must be even (reflection closure)", self.grid));
        }
        if self.kcut < 1 {
            return bad("kcut must be at least 1".into());
        }
        for (name, v) in [
            ("tol_exact", self.tol_exact),
            ("tol_trunc", self.tol_trunc),
            ("tol_grid", self.tol_grid),
        ] {
            if !v.is_finite() || v < 0.0 {
                return bad(format!("{name} = {v} must be a finite nonnegative number"));
            }
        }
        if self.suites.is_empty() {
            return bad("no suite selected".into());
        }
        Ok(())
    }

    /// Applies `key = value` lines; `#` starts a comment. `suite` may be
    /// repeated or comma-separated.
    pub fn apply_file_text(&mut self, text: &str) -> Result<()> {
        let mut suites: Vec<Suite> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value", lineno + 1)))?;
            let (key, value) = (key.trim().replace('-', "_"), value.trim());
            let num_err = |e: &dyn std::fmt::Display| {
                Error::Config(format!("line {}: {key}: {e}", lineno + 1))
            };
            match key.as_str() {
                "q" => self.q = value.parse().map_err(|e| num_err(&e))?,
                "dim" | "n" => self.dim = value.parse().map_err(|e| num_err(&e))?,
                "grid" | "m" => self.grid = value.parse().map_err(|e| num_err(&e))?,
                "kcut" | "k" => self.kcut = value.parse().map_err(|e| num_err(&e))?,
                "tol_exact" => self.tol_exact = value.parse().map_err(|e| num_err(&e))?,
                "tol_trunc" => self.tol_trunc = value.parse().map_err(|e| num_err(&e))?,
                "tol_grid" => self.tol_grid = value.parse().map_err(|e| num_err(&e))?,
                "seed" => self.seed = value.parse().map_err(|e| num_err(&e))?,
                "format" => self.format = value.parse()?,
                "suite" | "suites" => {
                    for s in value.split(',').filter(|s| !s.trim().is_empty()) {
                        suites.push(s.parse()?);
                    }
                }
                other => {
                    return Err(Error::Config(format!("line {}: unknown key '{other}'", lineno + 1)))
                }
            }
        }
        if !suites.is_empty() {
            self.suites = suites;
        }
        Ok(())
    }

    pub fn from_args(args: &Args) -> Result<Self> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &args.config {
            cfg.apply_file_text(&std::fs::read_to_string(path)?)?;
        }
        if let Some(v) = args.q {
            cfg.q = v;
        }
        if let Some(v) = args.dim {
            cfg.dim = v;
        }
        if let Some(v) = args.grid {
            cfg.grid = v;
        }
        if let Some(v) = args.kcut {
            cfg.kcut = v;
        }
        if let Some(v) = args.tol_exact {
            cfg.tol_exact = v;
        }
        if let Some(v) = args.tol_trunc {
            cfg.tol_trunc = v;
        }
        if let Some(v) = args.tol_grid {
            cfg.tol_grid = v;
        }
        if let Some(v) = args.seed {
            cfg.seed = v;
        }
        if !args.suite.is_empty() {
            cfg.suites = args
                .suite
                .iter()
                .flat_map(|s| s.split(','))
                .map(str::parse)
                .collect::<Result<_>>()?;
        }
        if let Some(f) = &args.format {
            cfg.format = f.parse()?;
        }
        let unique: BTreeSet<Suite> = cfg.suites.iter().copied().collect();
        cfg.suites = unique.into_iter().collect();
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Parser)]
#[command(name = "qplancherel", version, about = "Runs the SU_q(2) Plancherel and az+b check suites")]
pub struct Args {
    /// File of key=value lines supplying defaults; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<f64>,
    /// Truncation N of the representation space.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Number M of circle samples (even).
    #[arg(long)]
    pub grid: Option<usize>,
    /// az+b cutoff K (grid is (2K+1)²).
    #[arg(long)]
    pub kcut: Option<usize>,
    #[arg(long)]
    pub tol_exact: Option<f64>,
    #[arg(long)]
    pub tol_trunc: Option<f64>,
    #[arg(long)]
    pub tol_grid: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// qpoly, qrep, plancherel, weyl, tw2, azb; repeatable.
    #[arg(long)]
    pub suite: Vec<String>,
    /// json, csv or text.
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub suite: String,
    pub check: String,
    pub params: String,
    pub defect: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Entry {
    pub fn new(suite: Suite, check: &str, params: impl Into<String>, defect: f64, tol: f64) -> Self {
        Self {
            suite: suite.name().to_string(),
            check: check.to_string(),
            params: params.into(),
            defect,
            tol,
            pass: defect <= tol,
        }
    }

    /// Boolean outcome recorded as defect 0 or 1 against tolerance 0.
    pub fn flag(suite: Suite, check: &str, params: impl Into<String>, ok: bool) -> Self {
        Self::new(suite, check, params, if ok { 0.0 } else { 1.0 }, 0.0)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub config: Option<RunConfig>,
    pub summary: Summary,
    pub entries: Vec<Entry>,
}

impl Report {
    pub fn new(config: Option<RunConfig>, mut entries: Vec<Entry>) -> Self {
        entries.sort_by(|a, b| {
            (&a.suite, &a.check, &a.params).cmp(&(&b.suite, &b.check, &b.params))
        });
        let passed = entries.iter().filter(|e| e.pass).count();
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            summary: Summary {
                total: entries.len(),
                passed,
                failed: entries.len() - passed,
            },
            entries,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn emit(report: &Report, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(report)? + "\n"),
        Format::Csv => {
            let mut out = String::from("suite,check,params,defect,tol,pass\n");
            for e in &report.entries {
                let _ = writeln!(
                    out,
                    "{},{},{},{:.5e},{:.5e},{}",
                    csv_field(&e.suite),
                    csv_field(&e.check),
                    csv_field(&e.params),
                    e.defect,
                    e.tol,
                    e.pass
                );
            }
            Ok(out)
        }
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "qplancherel {}", report.version);
            let _ = writeln!(
                out,
                "{:<12} {:<28} {:<36} {:>12} {:>12}  result",
                "suite", "check", "params", "defect", "tol"
            );
            for e in &report.entries {
                let _ = writeln!(
                    out,
                    "{:<12} {:<28} {:<36} {:>12.5e} {:>12.5e}  {}",
                    e.suite,
                    e.check,
                    e.params,
                    e.defect,
                    e.tol,
                    if e.pass { "PASS" } else { "FAIL" }
                );
            }
            let s = report.summary;
            let _ = writeln!(out, "total {}  passed {}  failed {}", s.total, s.passed, s.failed);
            Ok(out)
        }
    }
}

fn write_output(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

/// Full CLI entry point; returns the process exit code.
pub fn run(args: Args) -> i32 {
    let cfg = match RunConfig::from_args(&args) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let report = match run_suite(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let text = match emit(&report, cfg.format) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    if let Err(e) = write_output(&text, args.out.as_deref()) {
        eprintln!("error: {e}");
        return 2;
    }
    if report.all_passed() {
        0
    } else {
        1
    }
}

//! Finite-dimensional property checks: the flip lemmas for `S ↦ S*`,
//! clock-and-shift pairs, the scaling-constant obstruction for positive
//! pairs `(D, E)`, and a condition evaluator for fields of such pairs.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::linalg::{
    frobenius, op_norm, random_hermitian, random_posdef, random_unitary, unitary_defect, CMatrix,
    PosDef,
};
use crate::{Error, Result, C64};

/// Outcome of one flip-lemma instance.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FlipReport {
    pub hypothesis_defect: f64,
    pub conclusion_defect: f64,
    pub hypothesis_holds: bool,
    /// `hypothesis ⟹ conclusion ≤ 10·tol`
    pub implication_holds: bool,
}

fn matrix_unit(n: usize, i: usize, j: usize) -> CMatrix {
    let mut s = CMatrix::zeros(n, n);
    s[(i, j)] = C64::new(1.0, 0.0);
    s
}

fn check_unitary(m: &CMatrix, tol: f64) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::Shape(format!("{}×{} is not square", m.nrows(), m.ncols())));
    }
    let d = unitary_defect(m);
    if d > tol {
        return Err(Error::NotUnitary(d));
    }
    Ok(())
}

/// For unitaries `x, y`: if `x S y* = y S x*` for every matrix unit `S`,
/// then `xy*` and `y*x` are selfadjoint.
pub fn flip_lemma1_check(x: &CMatrix, y: &CMatrix, tol: f64) -> Result<FlipReport> {
    check_unitary(x, tol)?;
    check_unitary(y, tol)?;
    if x.shape() != y.shape() {
        return Err(Error::Shape("x and y differ in size".into()));
    }
    let n = x.nrows();
    let mut hypothesis_defect: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let s = matrix_unit(n, i, j);
            let d = frobenius(&(x * &s * y.adjoint() - y * &s * x.adjoint()));
            hypothesis_defect = hypothesis_defect.max(d);
        }
    }
    let xy = x * y.adjoint();
    let yx = y.adjoint() * x;
    let conclusion_defect = frobenius(&(&xy - xy.adjoint())).max(frobenius(&(&yx - yx.adjoint())));
    Ok(flip_report(hypothesis_defect, conclusion_defect, tol))
}

fn flip_report(hypothesis_defect: f64, conclusion_defect: f64, tol: f64) -> FlipReport {
    let hypothesis_holds = hypothesis_defect <= tol;
    FlipReport {
        hypothesis_defect,
        conclusion_defect,
        hypothesis_holds,
        implication_holds: !hypothesis_holds || conclusion_defect <= 10.0 * tol,
    }
}

fn exp_i_hermitian(h: &CMatrix, t: f64) -> CMatrix {
    let eig = ((h + h.adjoint()).scale(0.5)).symmetric_eigen();
    let mut v = eig.eigenvectors.clone();
    for (j, mut col) in v.column_iter_mut().enumerate() {
        col *= C64::new(0.0, t * eig.eigenvalues[j]).exp();
    }
    v * eig.eigenvectors.adjoint()
}

/// With `a_t = e^{itA}`, `b_t = e^{itB}` and `c_t(S) = a_t S b_t`: if `c_t`
/// commutes with `S ↦ S*` for every sampled `t`, then `a_t = b_{−t}`.
pub fn flip_lemma3_check(a: &CMatrix, b: &CMatrix, t_samples: &[f64], tol: f64) -> Result<FlipReport> {
    if a.shape() != b.shape() || a.nrows() != a.ncols() {
        return Err(Error::Shape("A and B must be square of equal size".into()));
    }
    let n = a.nrows();
    let mut hypothesis_defect: f64 = 0.0;
    let mut conclusion_defect: f64 = 0.0;
    for &t in t_samples {
        let at = exp_i_hermitian(a, t);
        let bt = exp_i_hermitian(b, t);
        for i in 0..n {
            for j in 0..n {
                let s = matrix_unit(n, i, j);
                let d = frobenius(&(bt.adjoint() * &s * at.adjoint() - &at * &s * &bt));
                hypothesis_defect = hypothesis_defect.max(d);
            }
        }
        let b_minus = exp_i_hermitian(b, -t);
        conclusion_defect = conclusion_defect.max(frobenius(&(&at - b_minus)));
    }
    Ok(flip_report(hypothesis_defect, conclusion_defect, tol))
}

/// Seeded instance for the first flip lemma. Cycles through `y = x`,
/// `y = −x`, `y = ix` and an independent random `y`.
pub fn lemma1_instance(seed: u64, index: u64, dim: usize) -> (CMatrix, CMatrix) {
    let mut rng = trial_rng(seed, index);
    let x = random_unitary(&mut rng, dim);
    let y = match index % 4 {
        0 => x.clone(),
        1 => -x.clone(),
        2 => &x * C64::new(0.0, 1.0),
        _ => random_unitary(&mut rng, dim),
    };
    (x, y)
}

/// Seeded instance for the third flip lemma. Cycles through `B = −A`,
/// `B = −A + 0.1`, `B = −A + 1` and an independent random `B`.
pub fn lemma3_instance(seed: u64, index: u64, dim: usize) -> (CMatrix, CMatrix) {
    let mut rng = trial_rng(seed, index);
    let a = random_hermitian(&mut rng, dim);
    let id = CMatrix::identity(dim, dim);
    let b = match index % 4 {
        0 => -a.clone(),
        1 => -a.clone() + id * C64::new(0.1, 0.0),
        2 => -a.clone() + id,
        _ => random_hermitian(&mut rng, dim),
    };
    (a, b)
}

pub const LEMMA3_T_SAMPLES: [f64; 4] = [0.5, 1.0, 1.7, 2.3];

/// Independent PRNG stream per trial index.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Clock `U = diag(ω^j)`, shift `V e_j = e_{j+1}` and `ω = e^{2πi/m}`, so
/// that `UV = ωVU`.
pub fn clock_shift(m: usize) -> Result<(CMatrix, CMatrix, C64)> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("clock-shift size {m} < 2")));
    }
    let root = |j: usize| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * (j % m) as f64 / m as f64);
    let u = CMatrix::from_fn(m, m, |i, j| if i == j { root(j) } else { C64::new(0.0, 0.0) });
    let v = CMatrix::from_fn(m, m, |i, j| {
        if i == (j + 1) % m {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    Ok((u, v, root(1)))
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct WeylParams {
    /// Scaling constant.
    pub nu: f64,
    /// Largest matrix size; trials draw sizes from `2..=dim`.
    pub dim: usize,
    pub seed: u64,
    pub trials: u64,
}

impl WeylParams {
    pub fn validate(&self) -> Result<()> {
        if !self.nu.is_finite() || self.nu <= 0.0 {
            return Err(Error::InvalidParameter(format!("nu = {} must be positive", self.nu)));
        }
        if self.dim < 2 {
            return Err(Error::InvalidParameter(format!("dim = {} < 2", self.dim)));
        }
        Ok(())
    }
}

pub const WN1_SAMPLES: [(f64, f64); 2] = [(1.0, 1.0), (1.0, std::f64::consts::SQRT_2)];

/// `max_{(s,t)} ‖ν^{ist} D^{2is} E^{2it} − E^{2it} D^{2is}‖` in operator norm.
pub fn wn1_violation(d: &PosDef, e: &PosDef, nu: f64, samples: &[(f64, f64)]) -> f64 {
    samples
        .iter()
        .map(|&(s, t)| {
            let ds = d.pow_imag(2.0 * s);
            let et = e.pow_imag(2.0 * t);
            let phase = C64::new(0.0, s * t * nu.ln()).exp();
            op_norm(&((&ds * &et) * phase - &et * &ds))
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Wn1Report {
    pub min_violation: f64,
    pub argmin_trial: u64,
    pub argmin_dim: usize,
    pub trials: u64,
}

/// Random search for pairs that come closest to the scaling relation.
pub fn wn1_violation_search(params: &WeylParams) -> Result<Wn1Report> {
    params.validate()?;
    search(params, |rng, n| {
        let d = PosDef::from_matrix(&random_posdef(rng, n))?;
        let e = PosDef::from_matrix(&random_posdef(rng, n))?;
        Ok((d, e))
    })
}

/// Same search over commuting pairs: both matrices diagonal in one basis.
pub fn wn1_commuting_control(params: &WeylParams) -> Result<Wn1Report> {
    params.validate()?;
    search(params, |rng, n| {
        let mut draw = || (0..n).map(|_| rng.random_range(0.1..10.0)).collect::<Vec<f64>>();
        let d = PosDef::from_diagonal(&draw())?;
        let e = PosDef::from_diagonal(&draw())?;
        Ok((d, e))
    })
}

fn search(
    params: &WeylParams,
    mut draw: impl FnMut(&mut ChaCha8Rng, usize) -> Result<(PosDef, PosDef)>,
) -> Result<Wn1Report> {
    let mut best = Wn1Report {
        min_violation: f64::INFINITY,
        argmin_trial: 0,
        argmin_dim: 0,
        trials: params.trials,
    };
    for trial in 0..params.trials {
        let mut rng = trial_rng(params.seed, trial);
        let n = rng.random_range(2..=params.dim);
        let (d, e) = draw(&mut rng, n)?;
        let v = wn1_violation(&d, &e, params.nu, &WN1_SAMPLES);
        if v < best.min_violation {
            best.min_violation = v;
            best.argmin_trial = trial;
            best.argmin_dim = n;
        }
    }
    Ok(best)
}

#[derive(Debug, Clone)]
pub struct FieldEntry {
    pub label: String,
    pub d: PosDef,
    pub e: PosDef,
}

#[derive(Debug, Clone, Default)]
pub struct FieldData {
    pub entries: Vec<FieldEntry>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Scalar {
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Deserialize)]
struct RawEntry {
    label: String,
    #[serde(rename = "D")]
    d: Vec<Vec<Scalar>>,
    #[serde(rename = "E")]
    e: Vec<Vec<Scalar>>,
}

#[derive(Deserialize)]
struct RawFieldData {
    entries: Vec<RawEntry>,
}

fn to_matrix(rows: &[Vec<Scalar>]) -> Result<CMatrix> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::Shape("field matrix is not square".into()));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| match rows[i][j] {
        Scalar::Real(x) => C64::new(x, 0.0),
        Scalar::Complex([re, im]) => C64::new(re, im),
    }))
}

impl FieldData {
    pub fn push(&mut self, label: impl Into<String>, d: &CMatrix, e: &CMatrix) -> Result<()> {
        if d.shape() != e.shape() {
            return Err(Error::Shape("D and E differ in size".into()));
        }
        self.entries.push(FieldEntry {
            label: label.into(),
            d: PosDef::from_matrix(d)?,
            e: PosDef::from_matrix(e)?,
        });
        Ok(())
    }

    /// Parses `{"entries": [{"label", "D", "E"}]}`; matrix entries are
    /// numbers or `[re, im]` pairs.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawFieldData = serde_json::from_str(text)?;
        let mut out = FieldData::default();
        for entry in raw.entries {
            out.push(entry.label, &to_matrix(&entry.d)?, &to_matrix(&entry.e)?)?;
        }
        Ok(out)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Truth values of the field conditions for one entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Tw2Conditions {
    /// `D^{it}` scalar
    pub c1: bool,
    /// `E^{it}` scalar
    pub c2: bool,
    /// `E^{it} D^{−it}` scalar
    pub c7: bool,
    /// `E^{it} = D^{it}`
    pub c8: bool,
    /// `E^{it} D^{it}` scalar
    pub c10: bool,
}

impl Tw2Conditions {
    /// `8 ⟹ 7` and `(1 ∧ 2) ⟹ (7 ∧ 10)`.
    pub fn forced_implications_hold(&self) -> bool {
        (!self.c8 || self.c7) && (!(self.c1 && self.c2) || (self.c7 && self.c10))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Tw2Row {
    pub label: String,
    pub conditions: Tw2Conditions,
}

#[derive(Debug, Clone, Serialize)]
pub struct Tw2Table {
    pub rows: Vec<Tw2Row>,
    /// Labels of rows whose forced implications fail.
    pub violations: Vec<String>,
}

pub const TW2_T_SAMPLES: [f64; 3] = [0.3, 1.0, 1.7];
pub const SCALAR_TOL: f64 = 1e-8;

/// Frobenius distance of `m` to `(Tr m / dim)·1`.
pub fn scalar_distance(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mean = m.trace() / C64::new(n as f64, 0.0);
    frobenius(&(m - CMatrix::identity(n, n) * mean))
}

pub fn tw2_conditions(d: &PosDef, e: &PosDef, t_samples: &[f64], tol: f64) -> Tw2Conditions {
    let all = |f: &dyn Fn(f64) -> bool| t_samples.iter().all(|&t| f(t));
    Tw2Conditions {
        c1: all(&|t| scalar_distance(&d.pow_imag(t)) <= tol),
        c2: all(&|t| scalar_distance(&e.pow_imag(t)) <= tol),
        c7: all(&|t| scalar_distance(&(e.pow_imag(t) * d.pow_imag(-t))) <= tol),
        c8: all(&|t| frobenius(&(e.pow_imag(t) - d.pow_imag(t))) <= tol),
        c10: all(&|t| scalar_distance(&(e.pow_imag(t) * d.pow_imag(t))) <= tol),
    }
}

pub fn tw2_evaluate(fields: &FieldData, t_samples: &[f64], tol: f64) -> Tw2Table {
    let rows: Vec<Tw2Row> = fields
        .entries
        .iter()
        .map(|f| Tw2Row {
            label: f.label.clone(),
            conditions: tw2_conditions(&f.d, &f.e, t_samples, tol),
        })
        .collect();
    let violations = rows
        .iter()
        .filter(|r| !r.conditions.forced_implications_hold())
        .map(|r| r.label.clone())
        .collect();
    Tw2Table { rows, violations }
}

/// Seeded random field entry. Cycles through independent `(D, E)`, `E = D`,
/// scalar pairs, and `E = cD`.
pub fn random_field_entry(seed: u64, index: u64, max_dim: usize) -> Result<FieldEntry> {
    let mut rng = trial_rng(seed, index);
    let n = rng.random_range(2..=max_dim.max(2));
    let d = random_posdef(&mut rng, n);
    let (d, e) = match index % 4 {
        0 => {
            let e = random_posdef(&mut rng, n);
            (d, e)
        }
        1 => (d.clone(), d),
        2 => {
            let id = CMatrix::identity(n, n);
            let a: f64 = rng.random_range(0.5..3.0);
            let b: f64 = rng.random_range(0.5..3.0);
            (&id * C64::new(a, 0.0), id * C64::new(b, 0.0))
        }
        _ => {
            let c: f64 = rng.random_range(0.5..3.0);
            (d.clone(), d * C64::new(c, 0.0))
        }
    };
    Ok(FieldEntry {
        label: format!("random-{index}"),
        d: PosDef::from_matrix(&d)?,
        e: PosDef::from_matrix(&e)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::diag;

    #[test]
    fn lemma1_examples() {
        let mut rng = trial_rng(7, 0);
        let x = random_unitary(&mut rng, 3);
        let r = flip_lemma1_check(&x, &x, 1e-10).unwrap();
        assert!(r.hypothesis_holds && r.conclusion_defect < 1e-12);
        let r = flip_lemma1_check(&x, &(-x.clone()), 1e-10).unwrap();
        assert!(r.hypothesis_holds && r.implication_holds);
        let r = flip_lemma1_check(&x, &(&x * C64::new(0.0, 1.0)), 1e-10).unwrap();
        assert!(!r.hypothesis_holds);
        assert!((r.hypothesis_defect - 2.0).abs() < 1e-10);
        let bad = CMatrix::identity(3, 3) * C64::new(2.0, 0.0);
        assert!(matches!(flip_lemma1_check(&bad, &x, 1e-10), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn lemma3_examples() {
        let mut rng = trial_rng(8, 0);
        let a = random_hermitian(&mut rng, 3);
        let r = flip_lemma3_check(&a, &(-a.clone()), &LEMMA3_T_SAMPLES, 1e-10).unwrap();
        assert!(r.hypothesis_holds && r.conclusion_defect < 1e-12);
        for c in [0.1, 1.0] {
            let b = -a.clone() + CMatrix::identity(3, 3) * C64::new(c, 0.0);
            let r = flip_lemma3_check(&a, &b, &LEMMA3_T_SAMPLES, 1e-10).unwrap();
            assert!(!r.hypothesis_holds && r.implication_holds);
            // |e^{2itc} − 1| at the largest sample
            let phase = (C64::new(0.0, 2.0 * 2.3 * c).exp() - 1.0).norm();
            assert!(r.hypothesis_defect >= phase - 1e-10);
        }
        let b = random_hermitian(&mut rng, 3);
        let r = flip_lemma3_check(&a, &b, &LEMMA3_T_SAMPLES, 1e-10).unwrap();
        assert!(!r.hypothesis_holds);
    }

    #[test]
    fn clock_shift_examples() {
        let (u, v, w) = clock_shift(2).unwrap();
        assert!((w + 1.0).norm() < 1e-15);
        assert!(frobenius(&(&u - diag(&[C64::new(1.0, 0.0), C64::new(-1.0, 0.0)]))) < 1e-15);
        assert_eq!(v[(0, 1)], C64::new(1.0, 0.0));
        assert_eq!(v[(1, 0)], C64::new(1.0, 0.0));
        for m in [2, 3, 7, 16, 64] {
            let (u, v, w) = clock_shift(m).unwrap();
            assert!(op_norm(&(&u * &v - &v * &u * w)) <= 1e-14);
            let id = CMatrix::identity(m, m);
            assert!(op_norm(&(u.pow(m as u32) - &id)) < 1e-13);
            assert!(op_norm(&(v.pow(m as u32) - &id)) == 0.0);
        }
        assert!(clock_shift(1).is_err());
    }

    #[test]
    fn scaling_relation_examples() {
        let one = PosDef::from_diagonal(&[1.0, 1.0]).unwrap();
        let v = wn1_violation(&one, &one, 2.0, &[(1.0, 1.0)]);
        assert!((v - 2.0 * (2f64.ln() / 2.0).sin()).abs() < 1e-12);
        let d = PosDef::from_diagonal(&[1.0, 3.0]).unwrap();
        assert_eq!(wn1_violation(&d, &d, 1.0, &WN1_SAMPLES), 0.0);

        let p = WeylParams { nu: 1.0, dim: 4, seed: 1, trials: 50 };
        assert_eq!(wn1_commuting_control(&p).unwrap().min_violation, 0.0);
        let p = WeylParams { nu: 1.5, dim: 4, seed: 1, trials: 200 };
        let a = wn1_violation_search(&p).unwrap();
        let b = wn1_violation_search(&p).unwrap();
        assert!(a.min_violation > 0.0);
        assert_eq!(a.min_violation.to_bits(), b.min_violation.to_bits());
        assert!(WeylParams { nu: 0.0, ..p }.validate().is_err());
    }

    #[test]
    fn tw2_examples() {
        let mut f = FieldData::default();
        let id = CMatrix::identity(2, 2) * C64::new(3.0, 0.0);
        f.push("scalar", &id, &id).unwrap();
        let d = diag(&[C64::new(1.0, 0.0), C64::new(2.0, 0.0)]);
        f.push("diag12", &d, &d).unwrap();
        let table = tw2_evaluate(&f, &TW2_T_SAMPLES, SCALAR_TOL);
        let all = Tw2Conditions { c1: true, c2: true, c7: true, c8: true, c10: true };
        assert_eq!(table.rows[0].conditions, all);
        assert_eq!(
            table.rows[1].conditions,
            Tw2Conditions { c1: false, c2: false, c7: true, c8: true, c10: false }
        );
        assert!(table.violations.is_empty());
    }

    #[test]
    fn tw2_is_scale_aware() {
        for i in 0..40 {
            let entry = random_field_entry(5, i, 4).unwrap();
            let base = tw2_conditions(&entry.d, &entry.e, &TW2_T_SAMPLES, SCALAR_TOL);
            let c = 0.37 + i as f64;
            let scaled = tw2_conditions(
                &entry.d.scaled(c).unwrap(),
                &entry.e.scaled(c).unwrap(),
                &TW2_T_SAMPLES,
                SCALAR_TOL,
            );
            assert_eq!(base, scaled, "entry {i}");
            assert!(base.forced_implications_hold());
        }
    }

    #[test]
    fn field_json() {
        let text = r#"{"entries":[{"label":"x","D":[[1,0],[0,2]],"E":[[2,[0,0]],[0,1]]}]}"#;
        let f = FieldData::from_json(text).unwrap();
        assert_eq!(f.entries.len(), 1);
        assert_eq!(f.entries[0].label, "x");
        let bad = r#"{"entries":[{"label":"x","D":[[1,0],[0,-2]],"E":[[1,0],[0,1]]}]}"#;
        assert!(matches!(FieldData::from_json(bad), Err(Error::NotPositive(_))));
    }
}

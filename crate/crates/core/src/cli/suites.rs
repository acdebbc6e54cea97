//! The named check suites run by the CLI.

use crate::azb::{self, AzbConfig, GammaStep};
use crate::cli::{Entry, Report, RunConfig, Suite};
use crate::linalg::{frobenius, op_norm, CMatrix, PosDef};
use crate::plancherel::{self, PlancherelCtx};
use crate::qpoly::{Letter, Monomial, QParam, QPoly};
use crate::qrep::{self, d_diagonal, TruncParams};
use crate::weylcheck::{self, FieldData, WeylParams};
use crate::{Result, C64};

/// Threshold for identities carrying a sum over the whole truncation.
pub const TOL_SUM: f64 = 1e-10;
/// Clock-shift relation threshold.
pub const TOL_CLOCK: f64 = 1e-14;

pub fn run_suite(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let mut entries = Vec::new();
    for &suite in &cfg.suites {
        let mut out = match suite {
            Suite::Qpoly => qpoly_suite(cfg)?,
            Suite::Qrep => qrep_suite(cfg)?,
            Suite::Plancherel => plancherel_suite(cfg)?,
            Suite::Weyl => weyl_suite(cfg)?,
            Suite::Tw2 => tw2_suite(cfg)?,
            Suite::Azb => azb_suite(cfg)?,
        };
        entries.append(&mut out);
    }
    Ok(Report::new(Some(cfg.clone()), entries))
}

fn mono(param: QParam, m: &Monomial) -> QPoly {
    QPoly::monomial(param, *m, C64::new(1.0, 0.0))
}

/// `δ_{l,0} δ_{n,m} (1 − q²)/(1 − q^{2(n+1)})`
pub fn haar_closed_form(q: f64, m: &Monomial) -> f64 {
    if m.a_exp != 0 || m.n != m.m {
        return 0.0;
    }
    let q2 = q * q;
    (1.0 - q2) / (1.0 - q2.powi(m.n as i32 + 1))
}

/// `max |h(xy) − h(y σ_{−i}(x))|` over monomial pairs of degree `≤ d`.
pub fn kms_defect(param: QParam, d: u32) -> Result<f64> {
    let monos = Monomial::all_up_to(d);
    let polys: Vec<QPoly> = monos.iter().map(|m| mono(param, m)).collect();
    let shifted: Vec<QPoly> = polys.iter().map(|p| p.sigma_h(C64::new(0.0, -1.0))).collect();
    let mut worst: f64 = 0.0;
    for (x, sx) in polys.iter().zip(&shifted) {
        for y in &polys {
            let lhs = x.haar_product(y)?;
            let rhs = y.haar_product(sx)?;
            worst = worst.max((lhs - rhs).norm());
        }
    }
    Ok(worst)
}

fn qpoly_suite(cfg: &RunConfig) -> Result<Vec<Entry>> {
    let s = Suite::Qpoly;
    let param = QParam::new(cfg.q)?;
    let q = cfg.q;
    let p = format!("q={q}");
    let mut out = Vec::new();

    let monos6 = Monomial::all_up_to(6);
    let one = QPoly::one(param);
    let mut haar = 0.0f64;
    for m in &monos6 {
        let v = one.gns_inner(&mono(param, m))?;
        haar = haar.max((v - haar_closed_form(q, m)).norm());
    }
    out.push(Entry::new(s, "haar_closed_form", format!("{p},deg<=6"), haar, cfg.tol_exact));

    out.push(Entry::new(s, "kms", format!("{p},deg<=6"), kms_defect(param, 6)?, cfg.tol_exact));
    let a = QPoly::generator(param, Letter::Alpha);
    let a_s = QPoly::generator(param, Letter::AlphaStar);
    let inst = (a.try_mul(&a_s)?.haar() - 1.0 / (1.0 + q * q)).norm();
    out.push(Entry::new(s, "kms_instance", format!("{p},h(aa*)"), inst, cfg.tol_exact));

    let monos3 = Monomial::all_up_to(3);
    let mut anti = 0.0f64;
    for x in &monos3 {
        for y in &monos3 {
            let (x, y) = (mono(param, x), mono(param, y));
            let lhs = x.try_mul(&y)?.star();
            let rhs = y.star().try_mul(&x.star())?;
            anti = anti.max(lhs.distance(&rhs));
        }
    }
    out.push(Entry::new(s, "star_antimultiplicative", format!("{p},deg<=3"), anti, cfg.tol_exact));

    let mut rr = 0.0f64;
    let mut hr = 0.0f64;
    let mut ht = 0.0f64;
    let mut nf = 0.0f64;
    for m in Monomial::all_up_to(4) {
        let x = mono(param, &m);
        rr = rr.max(x.antipode_r().antipode_r().distance(&x));
        hr = hr.max((x.antipode_r().haar() - x.haar()).norm());
        ht = ht.max((x.tau(1.3).haar() - x.haar()).norm());
        let prod = x.try_mul(&x.star())?;
        nf = nf.max(prod.normal_form().distance(&prod));
    }
    out.push(Entry::new(s, "antipode_involution", format!("{p},deg<=4"), rr, cfg.tol_exact));
    out.push(Entry::new(s, "haar_antipode_invariance", format!("{p},deg<=4"), hr, cfg.tol_exact));
    out.push(Entry::new(s, "haar_scaling_invariance", format!("{p},deg<=4,t=1.3"), ht, cfg.tol_exact));
    out.push(Entry::new(s, "normal_form_idempotent", format!("{p},deg<=8"), nf, cfg.tol_exact));
    Ok(out)
}

/// Smallest even grid above `2·max_winding` for degree-6 monomials.
pub fn haar_grid(cfg_grid: usize) -> usize {
    cfg_grid.max(14)
}

fn qrep_suite(cfg: &RunConfig) -> Result<Vec<Entry>> {
    let s = Suite::Qrep;
    let param = QParam::new(cfg.q)?;
    let n = cfg.dim;
    let m_h = haar_grid(cfg.grid);
    let mut out = Vec::new();

    let mut worst = 0.0f64;
    for m in Monomial::all_up_to(6) {
        let p = mono(param, &m);
        worst = worst.max((qrep::haar_numeric(&p, n, m_h)? - p.haar()).norm());
    }
    out.push(Entry::new(
        s,
        "haar_numeric",
        format!("q={},N={n},M={m_h},deg<=6", cfg.q),
        worst,
        TOL_SUM,
    ));

    let tp = TruncParams::new(param, n, C64::new(1.0, 0.0))?;
    let r = qrep::relation_defects(&tp);
    let p = format!("q={},N={n}", cfg.q);
    out.push(Entry::new(s, "relation_unit_left", format!("{p},compressed"), r.unit_left, cfg.tol_exact));
    out.push(Entry::new(s, "relation_unit_right", format!("{p},compressed"), r.unit_right, cfg.tol_exact));
    out.push(Entry::new(s, "relation_normality", p.clone(), r.normality, cfg.tol_exact));
    out.push(Entry::new(s, "relation_commutation", p.clone(), r.commutation, cfg.tol_exact));
    let predicted = 1.0 - (cfg.q * cfg.q).powi(n as i32);
    out.push(Entry::new(
        s,
        "truncation_artifact",
        format!("{p},uncompressed"),
        (r.unit_right_full - predicted).abs(),
        cfg.tol_exact,
    ));
    Ok(out)
}

fn plancherel_suite(cfg: &RunConfig) -> Result<Vec<Entry>> {
    let s = Suite::Plancherel;
    let param = QParam::new(cfg.q)?;
    let ctx = PlancherelCtx::new(param, cfg.dim, cfg.grid)?.with_tolerances(cfg.tol_exact, cfg.tol_trunc);
    let m = cfg.grid as i64;
    let base = format!("q={},N={},M={}", cfg.q, cfg.dim, cfg.grid);
    let mut out = Vec::new();

    let sweep = plancherel::isometry_sweep(&Monomial::all_up_to(6), &ctx)?;
    out.push(Entry::new(
        s,
        "isometry",
        format!("{base},deg<=6,pairs={}", sweep.pairs),
        sweep.max_defect,
        TOL_SUM,
    ));

    let mut mult = 0.0f64;
    for a in Monomial::all_up_to(2) {
        for x in Monomial::all_up_to(4) {
            if (a.winding() + x.winding()).abs() >= m {
                continue;
            }
            let d = plancherel::multiplicativity_check(&mono(param, &a), &mono(param, &x), &ctx)?;
            mult = mult.max(d);
        }
    }
    out.push(Entry::new(s, "multiplicativity", format!("{base},a:deg<=2,x:deg<=4"), mult, ctx.tol_exact));

    let cal = plancherel::calibrate_orientation(&ctx);
    let name = match cal.orientation {
        plancherel::Orientation::Forward => "forward",
        plancherel::Orientation::Backward => "backward",
    };
    out.push(Entry::new(
        s,
        "orientation",
        format!("{base},orientation={name},opposite={:.3e}", cal.backward_defect),
        cal.forward_defect.min(cal.backward_defect),
        ctx.tol_exact,
    ));

    let monos4 = Monomial::all_up_to(4);
    let (mut scaling, mut antipode, mut nabla, mut jh) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for mo in &monos4 {
        let p = mono(param, mo);
        for k in 0..m {
            scaling = scaling.max(plancherel::check_stw9_oriented(&p, k, cal.orientation, &ctx)?);
            nabla = nabla.max(plancherel::check_nabla_tw1(&p, k, &ctx)?);
        }
        antipode = antipode.max(plancherel::check_stw10(&p, &ctx)?);
        jh = jh.max(plancherel::check_modular_conjugation(&p, &ctx)?);
    }
    out.push(Entry::new(s, "scaling_group", format!("{base},deg<=4,k=0..{m}"), scaling, ctx.tol_exact));
    out.push(Entry::new(s, "unitary_antipode", format!("{base},deg<=4"), antipode, ctx.tol_exact));
    out.push(Entry::new(s, "modular_group", format!("{base},deg<=4,k=0..{m},compressed"), nabla, ctx.tol_trunc));
    out.push(Entry::new(s, "modular_conjugation", format!("{base},deg<=4,compressed"), jh, ctx.tol_trunc));
    out.push(Entry::new(
        s,
        "sigma_jtilde_commute",
        base.clone(),
        plancherel::sigma_jtilde_commutation(&ctx)?,
        ctx.tol_exact,
    ));

    for (k, t) in [(1, 1), (1, 2), (3, 2)] {
        let d = plancherel::check_delta_relations(k, t, &ctx)?;
        let p = format!("{base},k={k},s={t}");
        out.push(Entry::new(s, "delta_group_law", p.clone(), d.group_law, ctx.tol_exact));
        out.push(Entry::new(s, "delta_p_commute", p.clone(), d.p_commute, ctx.tol_exact));
        out.push(Entry::new(s, "delta_sigma_commute", p.clone(), d.sigma_commute, ctx.tol_exact));
        if k == 1 {
            let w = d.witness.map(|(a, b)| format!("{a}->{b}")).unwrap_or_else(|| "none".into());
            out.push(Entry::flag(s, "delta_non_decomposable", format!("{p},witness={w}"), d.witness.is_some()));
        }
    }

    let n_max = 8.min(cfg.dim - 1);
    let mut mu = 0.0f64;
    for n in 0..=n_max {
        for l in 0..=n_max {
            mu = mu.max(plancherel::build_matrix_unit(n, l, &ctx)?.defect);
        }
    }
    out.push(Entry::new(s, "matrix_units", format!("{base},n,l<={n_max}"), mu, TOL_SUM));
    let g = plancherel::matrix_unit_gram(n_max, &ctx)?;
    out.push(Entry::flag(
        s,
        "matrix_unit_gram_full_rank",
        format!("{base},rank={}/{},min_eig={:.6}", g.rank, g.size, g.min_eigenvalue),
        g.full_rank(),
    ));
    Ok(out)
}

const WEYL_INSTANCES: u64 = 100;
const WN1_TRIALS: u64 = 10_000;

fn weyl_suite(cfg: &RunConfig) -> Result<Vec<Entry>> {
    let s = Suite::Weyl;
    let seed = cfg.seed;
    let tol = 1e-10;
    let mut out = Vec::new();

    let (mut fails1, mut holds1) = (0, 0);
    for i in 0..WEYL_INSTANCES {
        let (x, y) = weylcheck::lemma1_instance(seed, i, 2 + (i as usize / 4) % 4);
        let r = weylcheck::flip_lemma1_check(&x, &y, tol)?;
        fails1 += usize::from(!r.implication_holds);
        holds1 += usize::from(r.hypothesis_holds);
    }
    out.push(Entry::new(
        s,
        "flip_lemma1",
        format!("seed={seed},instances={WEYL_INSTANCES},hypothesis_held={holds1}"),
        fails1 as f64,
        0.0,
    ));

    let (mut fails3, mut holds3, mut phase_holds) = (0, 0, 0);
    for i in 0..WEYL_INSTANCES {
        let (a, b) = weylcheck::lemma3_instance(seed, i, 2 + (i as usize / 4) % 4);
        let r = weylcheck::flip_lemma3_check(&a, &b, &weylcheck::LEMMA3_T_SAMPLES, tol)?;
        fails3 += usize::from(!r.implication_holds);
        holds3 += usize::from(r.hypothesis_holds);
        if matches!(i % 4, 1 | 2) {
            phase_holds += usize::from(r.hypothesis_holds);
        }
    }
    out.push(Entry::new(
        s,
        "flip_lemma3",
        format!("seed={seed},instances={WEYL_INSTANCES},hypothesis_held={holds3}"),
        fails3 as f64,
        0.0,
    ));
    out.push(Entry::new(s, "flip_lemma3_phase_family", "c=0.1,1", phase_holds as f64, 0.0));

    let mut clock = 0.0f64;
    for n in 2..=64 {
        let (u, v, w) = weylcheck::clock_shift(n)?;
        clock = clock.max(op_norm(&(&u * &v - &v * &u * w)));
    }
    out.push(Entry::new(s, "clock_shift", "M=2..64", clock, TOL_CLOCK));

    let params = WeylParams { nu: 1.5, dim: 6, seed, trials: WN1_TRIALS };
    let r = weylcheck::wn1_violation_search(&params)?;
    out.push(Entry::flag(
        s,
        "scaling_relation_min_violation",
        format!("nu=1.5,dim<=6,trials={WN1_TRIALS},seed={seed},min={:.6e}", r.min_violation),
        r.min_violation > 0.0,
    ));
    let control = weylcheck::wn1_commuting_control(&WeylParams { nu: 1.0, ..params })?;
    out.push(Entry::new(s, "scaling_relation_commuting_control", format!("nu=1,trials={WN1_TRIALS}"), control.min_violation, 0.0));
    let one = PosDef::from_diagonal(&[1.0, 1.0])?;
    let v = weylcheck::wn1_violation(&one, &one, 2.0, &[(1.0, 1.0)]);
    let analytic = 2.0 * (2f64.ln() / 2.0).sin();
    out.push(Entry::new(s, "scaling_relation_analytic_point", "nu=2,D=E=1,s=t=1", (v - analytic).abs(), 1e-12));
    Ok(out)
}

fn real_diag(v: &[f64]) -> CMatrix {
    let c: Vec<C64> = v.iter().map(|&x| C64::new(x, 0.0)).collect();
    crate::linalg::diag(&c)
}

fn tw2_suite(cfg: &RunConfig) -> Result<Vec<Entry>> {
    let s = Suite::Tw2;
    let t = &weylcheck::TW2_T_SAMPLES;
    let tol = weylcheck::SCALAR_TOL;
    let mut out = Vec::new();

    let mut f = FieldData::default();
    let d12 = real_diag(&[1.0, 2.0]);
    f.push("diag12", &d12, &d12)?;
    let dq = real_diag(&d_diagonal(QParam::new(cfg.q)?, cfg.dim));
    f.push("suq2_dual", &dq, &dq)?;
    let table = weylcheck::tw2_evaluate(&f, t, tol);
    let c = table.rows[0].conditions;
    out.push(Entry::flag(
        s,
        "diag12_table",
        "D=E=diag(1,2)",
        !c.c1 && !c.c2 && c.c7 && c.c8 && !c.c10,
    ));
    let c = table.rows[1].conditions;
    out.push(Entry::flag(s, "suq2_dual_field", format!("q={},N={}", cfg.q, cfg.dim), c.c8 && !c.c1));

    let mut random = FieldData::default();
    let mut scale_flips = 0;
    for i in 0..WEYL_INSTANCES {
        let e = weylcheck::random_field_entry(cfg.seed, i, 5)?;
        let base = weylcheck::tw2_conditions(&e.d, &e.e, t, tol);
        let k = 0.25 + 0.5 * i as f64;
        let scaled = weylcheck::tw2_conditions(&e.d.scaled(k)?, &e.e.scaled(k)?, t, tol);
        scale_flips += usize::from(base != scaled);
        random.entries.push(e);
    }
    let table = weylcheck::tw2_evaluate(&random, t, tol);
    out.push(Entry::new(
        s,
        "forced_implications",
        format!("seed={},fields={WEYL_INSTANCES}", cfg.seed),
        table.violations.len() as f64,
        0.0,
    ));
    out.push(Entry::new(
        s,
        "scale_awareness",
        format!("seed={},fields={WEYL_INSTANCES}", cfg.seed),
        scale_flips as f64,
        0.0,
    ));
    Ok(out)
}

/// Interior commutation defect at `(s,t) = (1,1)` for each cutoff.
pub fn de_commute_series(q: f64, cutoffs: &[usize]) -> Result<Vec<f64>> {
    cutoffs
        .iter()
        .map(|&k| {
            let c = AzbConfig::new(q, k)?;
            let pair = azb::op_de(&c)?;
            Ok(azb::check_de_commute(&c, &pair, &[(1.0, 1.0)], None)[0])
        })
        .collect()
}

pub const DE_SERIES_CUTOFFS: [usize; 3] = [4, 6, 8];

fn azb_suite(cfg: &RunConfig) -> Result<Vec<Entry>> {
    let s = Suite::Azb;
    let q = cfg.q.abs();
    let c = AzbConfig::new(q, cfg.kcut)?;
    let g = c.grid();
    let base = format!("q={q},K={}", cfg.kcut);
    let mut out = Vec::new();

    let f = azb::fourier_matrix(&c)?;
    out.push(Entry::new(s, "fourier_unitary", base.clone(), crate::linalg::unitary_defect(&f), cfg.tol_exact));
    let f2 = &f * &f;
    let parity = CMatrix::from_fn(g.size(), g.size(), |r, col| {
        let (k, j) = g.point(r);
        if col == g.index(-k, (g.m - j) % g.m) {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    out.push(Entry::new(s, "fourier_square_parity", base.clone(), frobenius(&(f2 - parity)), cfg.tol_exact));

    let a = azb::op_a(&c)?;
    let b = azb::op_b(&c)?;
    out.push(Entry::new(
        s,
        "a_round_trip",
        format!("{base},F*aF=b"),
        frobenius(&(f.adjoint() * &a * &f - &b)),
        cfg.tol_exact,
    ));
    let mut sa: Vec<f64> = a.clone().svd(false, false).singular_values.iter().copied().collect();
    let mut sb: Vec<f64> = b.clone().svd(false, false).singular_values.iter().copied().collect();
    sa.sort_by(f64::total_cmp);
    sb.sort_by(f64::total_cmp);
    let iso = sa.iter().zip(&sb).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    out.push(Entry::new(s, "a_b_isospectral", base.clone(), iso, cfg.tol_exact));
    out.push(Entry::new(s, "a_normality", base.clone(), azb::normality_defect(&a), cfg.tol_trunc));

    let pair = azb::op_de(&c)?;
    let e_err = pair
        .e
        .eigenvalues()
        .iter()
        .enumerate()
        .map(|(i, &v)| (v - q.powi(-(g.point(i).0 as i32))).abs())
        .fold(0.0, f64::max);
    out.push(Entry::new(s, "e_exact", base.clone(), e_err, 0.0));

    let trivial = azb::check_de_commute(&c, &pair, &[(0.0, 1.0), (1.0, 0.0)], None);
    out.push(Entry::new(
        s,
        "de_commute_trivial",
        format!("{base},s=0|t=0"),
        trivial.into_iter().fold(0.0, f64::max),
        cfg.tol_exact,
    ));
    let main = azb::check_de_commute(&c, &pair, &[(1.0, 1.0), (1.0, std::f64::consts::SQRT_2)], None);
    out.push(Entry::new(s, "de_commute", format!("{base},s=1,t=1"), main[0], cfg.tol_grid));
    out.push(Entry::new(s, "de_commute", format!("{base},s=1,t=sqrt2"), main[1], cfg.tol_grid));
    let nu2 = azb::check_de_commute(&c, &pair, &[(1.0, 1.0)], Some(2.0))[0];
    let expected = 2.0 * (2f64.ln() / 2.0).sin();
    out.push(Entry::new(
        s,
        "de_commute_nu2_control",
        format!("{base},nu=2"),
        ((nu2 - expected).abs() - main[0]).max(0.0),
        cfg.tol_exact,
    ));

    let series = de_commute_series(q, &DE_SERIES_CUTOFFS)?;
    for (k, v) in DE_SERIES_CUTOFFS.iter().zip(&series) {
        out.push(Entry::new(s, "de_commute_series", format!("q={q},K={k}"), *v, cfg.tol_grid));
    }
    let monotone = series.windows(2).all(|w| w[1] < w[0]);
    let shown: Vec<String> = series.iter().map(|v| format!("{v:.3e}")).collect();
    out.push(Entry::flag(
        s,
        "de_commute_monotone",
        format!("q={q},K=4;6;8,series={}", shown.join(";")),
        monotone,
    ));

    let f_test = |z: C64| z / (C64::new(1.0, 0.0) + z.norm_sqr());
    for (dk, dj, tol) in [(0, 1, 0.0), (0, 3, 0.0), (1, 0, cfg.tol_exact), (-1, 2, cfg.tol_exact)] {
        let d = azb::covariance_shift_check(&c, GammaStep { dk, dj }, f_test)?;
        out.push(Entry::new(s, "covariance_shift", format!("{base},dk={dk},dj={dj}"), d, tol));
    }
    Ok(out)
}

//! The Plancherel transform `Q_L` of the dual of SU_q(2), discretized on a
//! circle grid, and the checks of the operators it transports.
//!
//! `Q_L Λ_h(a)` is the field `λ ↦ ψ^{2,λ}(a) D_λ^{−1}`. Each check compares a
//! symbolic route (an automorphism applied in [`crate::qpoly`] before the
//! transform) with an operator route (a map on [`HSField`]s applied after the
//! transform) and returns the blockwise distance.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dirint::{
    admissible_t, flip_sigma, hs_inner, jtilde, rotate, steps_for_t, CircleGrid, DecompOp, HSField,
};
use crate::linalg::{compress, random_complex_gaussian, CMatrix};
use crate::qpoly::{Letter, Monomial, QParam, QPoly};
use crate::qrep::{d_diagonal, d_power, eval_monomial, eval_poly, DExponent, TruncParams};
use crate::{Error, Result, C64};

pub const TOL_EXACT: f64 = 1e-12;
pub const TOL_TRUNC: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct PlancherelCtx {
    pub param: QParam,
    pub dim: usize,
    pub grid: CircleGrid,
    pub tol_exact: f64,
    pub tol_trunc: f64,
    d_inv: Vec<f64>,
}

impl PlancherelCtx {
    pub fn new(param: QParam, dim: usize, grid_size: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter(format!("truncation N = {dim} < 2")));
        }
        let grid = CircleGrid::even(grid_size)?;
        Ok(Self {
            param,
            dim,
            grid,
            tol_exact: TOL_EXACT,
            tol_trunc: TOL_TRUNC,
            d_inv: d_diagonal(param, dim).into_iter().map(|d| 1.0 / d).collect(),
        })
    }

    pub fn with_tolerances(mut self, tol_exact: f64, tol_trunc: f64) -> Self {
        self.tol_exact = tol_exact;
        self.tol_trunc = tol_trunc;
        self
    }

    fn trunc(&self, j: usize) -> TruncParams {
        TruncParams {
            param: self.param,
            dim: self.dim,
            lambda: self.grid.point(j),
        }
    }

    fn times_d_inv(&self, mut m: CMatrix) -> CMatrix {
        for (k, mut col) in m.column_iter_mut().enumerate() {
            col *= C64::new(self.d_inv[k], 0.0);
        }
        m
    }

    fn compressed_dim(&self) -> usize {
        self.dim - 1
    }
}

/// `Q_L Λ_h(p)`: block at `λ_j` is `ψ^{2,λ_j}(p) D^{−1}`.
pub fn q_l(p: &QPoly, ctx: &PlancherelCtx) -> HSField {
    let blocks = (0..ctx.grid.size())
        .map(|j| ctx.times_d_inv(eval_poly(p, &ctx.trunc(j))))
        .collect();
    HSField::from_blocks(ctx.grid, blocks).expect("grid-shaped blocks")
}

/// `Q_L Λ_h` of a single monomial with unit coefficient.
pub fn q_l_monomial(mono: &Monomial, ctx: &PlancherelCtx) -> HSField {
    let blocks = (0..ctx.grid.size())
        .map(|j| ctx.times_d_inv(eval_monomial(mono, &ctx.trunc(j))))
        .collect();
    HSField::from_blocks(ctx.grid, blocks).expect("grid-shaped blocks")
}

fn check_winding(p: &QPoly, ctx: &PlancherelCtx) -> Result<()> {
    let w = p.max_winding();
    if w >= ctx.grid.size() as i64 {
        return Err(Error::WindingOverflow {
            winding: w,
            grid: ctx.grid.size(),
        });
    }
    Ok(())
}

/// `|⟨Q_L Λ_h(p1), Q_L Λ_h(p2)⟩ − h(p1* p2)|`.
pub fn isometry_defect(p1: &QPoly, p2: &QPoly, ctx: &PlancherelCtx) -> Result<f64> {
    let p1s = p1.star();
    check_winding(&p1s.try_mul(p2)?, ctx)?;
    let numeric = hs_inner(&q_l(p1, ctx), &q_l(p2, ctx))?;
    Ok((numeric - p1s.haar_product(p2)?).norm())
}

#[derive(Debug, Clone, Copy)]
pub struct SweepResult {
    pub max_defect: f64,
    pub pairs: usize,
    /// Pairs left out because their relative winding reaches `M`.
    pub skipped: usize,
}

/// [`isometry_defect`] over all ordered pairs of `monos`, each field built once.
pub fn isometry_sweep(monos: &[Monomial], ctx: &PlancherelCtx) -> Result<SweepResult> {
    let fields: Vec<HSField> = monos.iter().map(|m| q_l_monomial(m, ctx)).collect();
    let one = C64::new(1.0, 0.0);
    let mut out = SweepResult { max_defect: 0.0, pairs: 0, skipped: 0 };
    for (i, m1) in monos.iter().enumerate() {
        let p1 = QPoly::monomial(ctx.param, *m1, one).star();
        for (j, m2) in monos.iter().enumerate() {
            if (m2.winding() - m1.winding()).abs() >= ctx.grid.size() as i64 {
                out.skipped += 1;
                continue;
            }
            let exact = p1.haar_product(&QPoly::monomial(ctx.param, *m2, one))?;
            let numeric = hs_inner(&fields[i], &fields[j])?;
            out.max_defect = out.max_defect.max((numeric - exact).norm());
            out.pairs += 1;
        }
    }
    Ok(out)
}

/// `‖Q_L Λ_h(a x) − (ψ(a) ⊗ 1) Q_L Λ_h(x)‖` on compressed blocks.
pub fn multiplicativity_check(a: &QPoly, x: &QPoly, ctx: &PlancherelCtx) -> Result<f64> {
    let ax = a.try_mul(x)?;
    check_winding(&ax, ctx)?;
    let left: Vec<CMatrix> = (0..ctx.grid.size())
        .map(|j| eval_poly(a, &ctx.trunc(j)))
        .collect();
    let op = DecompOp::left_only(ctx.grid, left)?;
    let lhs = q_l(&ax, ctx).compress(ctx.compressed_dim());
    let rhs = op.apply(&q_l(x, ctx))?.compress(ctx.compressed_dim());
    lhs.distance(&rhs)
}

/// Direction in which grid indices move under the transported `P^{it}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// `P̃^{it}` for `t = admissible_t(k)` is `rotate(·, +k)`.
    Forward,
    /// `P̃^{it}` for `t = admissible_t(k)` is `rotate(·, −k)`.
    Backward,
}

impl Orientation {
    pub fn steps(self, k: i64) -> i64 {
        match self {
            Orientation::Forward => k,
            Orientation::Backward => -k,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Calibration {
    pub orientation: Orientation,
    pub forward_defect: f64,
    pub backward_defect: f64,
}

/// Fixes the rotation direction once, on `p = γ` with one grid step.
pub fn calibrate_orientation(ctx: &PlancherelCtx) -> Calibration {
    let gamma = QPoly::generator(ctx.param, Letter::Gamma);
    let t = admissible_t(ctx.grid, 1, ctx.param);
    let lhs = q_l(&gamma.tau(t), ctx);
    let base = q_l(&gamma, ctx);
    let forward_defect = lhs.distance(&rotate(&base, 1)).expect("same shape");
    let backward_defect = lhs.distance(&rotate(&base, -1)).expect("same shape");
    let orientation = if forward_defect <= backward_defect {
        Orientation::Forward
    } else {
        Orientation::Backward
    };
    Calibration {
        orientation,
        forward_defect,
        backward_defect,
    }
}

/// Transported scaling group `P̃^{it}` at `t = admissible_t(k)`.
pub fn p_tilde(x: &HSField, k: i64, orientation: Orientation) -> HSField {
    rotate(x, orientation.steps(k))
}

/// `‖Q_L Λ_h(τ_t(p)) − P̃^{it} Q_L Λ_h(p)‖` with `t = admissible_t(k)`.
pub fn check_stw9(p: &QPoly, k: i64, ctx: &PlancherelCtx) -> Result<f64> {
    let orientation = calibrate_orientation(ctx).orientation;
    check_stw9_oriented(p, k, orientation, ctx)
}

pub fn check_stw9_oriented(
    p: &QPoly,
    k: i64,
    orientation: Orientation,
    ctx: &PlancherelCtx,
) -> Result<f64> {
    let t = admissible_t(ctx.grid, k, ctx.param);
    let lhs = q_l(&p.tau(t), ctx);
    let rhs = p_tilde(&q_l(p, ctx), k, orientation);
    lhs.distance(&rhs)
}

/// As [`check_stw9`] for an explicit `t`; non grid-exact `t` is rejected.
pub fn check_stw9_at(p: &QPoly, t: f64, ctx: &PlancherelCtx) -> Result<f64> {
    let k = steps_for_t(ctx.grid, t, ctx.param)?;
    check_stw9(p, k, ctx)
}

/// `‖Q_L J_φ Λ_h(p) − J̃ Q_L Λ_h(p)‖` with `J_φ Λ_h(p) = Λ_h(R(p*))`.
pub fn check_stw10(p: &QPoly, ctx: &PlancherelCtx) -> Result<f64> {
    let lhs = q_l(&p.jphi(), ctx);
    let rhs = jtilde(&q_l(p, ctx), ctx.param)?;
    lhs.distance(&rhs)
}

/// Modular group of the Haar state transported to the field side:
/// `‖Q_L Λ_h(σ_t(p)) − (D^{−2it} ⊗ (D^{2it})ᵀ) Q_L Λ_h(p)‖`, compressed.
pub fn check_nabla_tw1(p: &QPoly, k: i64, ctx: &PlancherelCtx) -> Result<f64> {
    let t = admissible_t(ctx.grid, k, ctx.param);
    let op = DecompOp::sandwich(
        ctx.grid,
        d_power(DExponent::TwoIt(-t), ctx.param, ctx.dim),
        d_power(DExponent::TwoIt(t), ctx.param, ctx.dim),
    );
    let lhs = q_l(&p.sigma_h(C64::new(t, 0.0)), ctx).compress(ctx.compressed_dim());
    let rhs = op.apply(&q_l(p, ctx))?.compress(ctx.compressed_dim());
    lhs.distance(&rhs)
}

/// `δ̃^{it} = (E^{2it} ⊗ (E^{−2it})ᵀ) ∘ P̃^{−it}` with `E = D` and
/// `t = admissible_t(k)`.
pub fn delta_tilde(x: &HSField, k: i64, orientation: Orientation, ctx: &PlancherelCtx) -> Result<HSField> {
    let t = admissible_t(ctx.grid, k, ctx.param);
    let op = DecompOp::sandwich(
        ctx.grid,
        d_power(DExponent::TwoIt(t), ctx.param, x.dim()),
        d_power(DExponent::TwoIt(-t), ctx.param, x.dim()),
    );
    op.apply(&p_tilde(x, -k, orientation))
}

#[derive(Debug, Clone, Copy)]
pub struct DeltaDefects {
    /// `‖δ̃_{t+s} − δ̃_t δ̃_s‖`
    pub group_law: f64,
    /// `‖δ̃_t P̃_s − P̃_s δ̃_t‖`
    pub p_commute: f64,
    /// `‖Σ δ̃_t Σ − δ̃_t‖`
    pub sigma_commute: f64,
    /// Block moved by `δ̃_t` from a field supported at block 0.
    pub witness: Option<(usize, usize)>,
}

const PROBE_SEED: u64 = 0x5eed_de17a;

fn probe_fields(ctx: &PlancherelCtx) -> Vec<HSField> {
    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
    let random = HSField::from_fn(ctx.grid, ctx.dim, |_, _| {
        random_complex_gaussian(&mut rng, ctx.dim, ctx.dim)
    })
    .expect("grid-shaped blocks");
    // unit norm, so defects of these unitary maps read as relative errors
    let random = random.scale(C64::new(1.0 / random.norm(), 0.0));
    let gamma_alpha = q_l_monomial(&Monomial::new(1, 1, 0), ctx);
    vec![random, gamma_alpha]
}

/// Group law, `P`–`δ` and `Σ`–`δ` commutation of the transported `δ^{it}`,
/// evaluated on fixed probe fields, plus the non-decomposability witness.
pub fn check_delta_relations(k: i64, s: i64, ctx: &PlancherelCtx) -> Result<DeltaDefects> {
    let orientation = calibrate_orientation(ctx).orientation;
    let mut out = DeltaDefects {
        group_law: 0.0,
        p_commute: 0.0,
        sigma_commute: 0.0,
        witness: None,
    };
    for x in probe_fields(ctx) {
        let dk = delta_tilde(&x, k, orientation, ctx)?;
        let dks = delta_tilde(&x, k + s, orientation, ctx)?;
        let dk_ds = delta_tilde(&delta_tilde(&x, s, orientation, ctx)?, k, orientation, ctx)?;
        out.group_law = out.group_law.max(dks.distance(&dk_ds)?);

        let a = delta_tilde(&p_tilde(&x, s, orientation), k, orientation, ctx)?;
        let b = p_tilde(&dk, s, orientation);
        out.p_commute = out.p_commute.max(a.distance(&b)?);

        let c = flip_sigma(&delta_tilde(&flip_sigma(&x), k, orientation, ctx)?);
        out.sigma_commute = out.sigma_commute.max(c.distance(&dk)?);
    }
    out.witness = decomposability_witness(k, orientation, ctx)?;
    Ok(out)
}

/// Applies `δ̃_t` to a field supported on block 0; returns `(0, j)` when
/// the image lives on a different block `j`.
pub fn decomposability_witness(
    k: i64,
    orientation: Orientation,
    ctx: &PlancherelCtx,
) -> Result<Option<(usize, usize)>> {
    let mut x = HSField::zeros(ctx.grid, ctx.dim);
    let mut blocks = x.blocks().to_vec();
    blocks[0][(0, 0)] = C64::new(1.0, 0.0);
    x = HSField::from_blocks(ctx.grid, blocks)?;
    let image = delta_tilde(&x, k, orientation, ctx)?;
    match image.support(0.0).as_slice() {
        [j] if *j != 0 => Ok(Some((0, *j))),
        _ => Ok(None),
    }
}

/// Modular conjugation of the Haar state:
/// `‖Q_L Λ_h(σ_{−i/2}(p*)) − Σ Q_L Λ_h(p)‖`, compressed.
pub fn check_modular_conjugation(p: &QPoly, ctx: &PlancherelCtx) -> Result<f64> {
    let jh = p.star().sigma_h(C64::new(0.0, -0.5));
    let lhs = q_l(&jh, ctx).compress(ctx.compressed_dim());
    let rhs = flip_sigma(&q_l(p, ctx)).compress(ctx.compressed_dim());
    lhs.distance(&rhs)
}

/// `‖Σ J̃ x − J̃ Σ x‖` on the probe fields.
pub fn sigma_jtilde_commutation(ctx: &PlancherelCtx) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for x in probe_fields(ctx) {
        let a = flip_sigma(&jtilde(&x, ctx.param)?);
        let b = jtilde(&flip_sigma(&x), ctx.param)?;
        worst = worst.max(a.distance(&b)?);
    }
    Ok(worst)
}

#[derive(Debug, Clone)]
pub struct MatrixUnit {
    pub n: usize,
    pub l: usize,
    /// `ψ^{2,λ}(E_{n,l})`, independent of `λ`.
    pub matrix: CMatrix,
    /// `max_k ‖ψ(E_{n,l})φ_k − δ_{l,k}φ_n‖`.
    pub defect: f64,
}

/// Spectral projection of `ψ(γγ*)` onto its eigenvalue `q^{2l}`.
pub fn spectral_projection(l: usize, ctx: &PlancherelCtx) -> Result<CMatrix> {
    let gg = eval_monomial(&Monomial::new(0, 1, 1), &ctx.trunc(0));
    let herm = (&gg + gg.adjoint()).scale(0.5);
    let eig = herm.symmetric_eigen();
    let target = (ctx.param.q() * ctx.param.q()).powi(l as i32);
    let gap = eig
        .eigenvalues
        .iter()
        .map(|&v| (v - target).abs())
        .filter(|&d| d > 0.5 * target * (1.0 - ctx.param.q() * ctx.param.q()))
        .fold(f64::INFINITY, f64::min);
    let resolution = 1e3 * f64::EPSILON;
    if !gap.is_finite() || gap <= resolution {
        return Err(Error::Clustering { target, gap });
    }
    let mut proj = CMatrix::zeros(ctx.dim, ctx.dim);
    for (i, &v) in eig.eigenvalues.iter().enumerate() {
        if (v - target).abs() < gap / 2.0 {
            let u = eig.eigenvectors.column(i);
            proj += u * u.adjoint();
        }
    }
    Ok(proj)
}

/// `E_{n,l}` built from the spectral projection at `q^{2l}` and the
/// `α`/`α*` ladder, normalized so that `ψ(E_{n,l})φ_l = φ_n`.
pub fn build_matrix_unit(n: usize, l: usize, ctx: &PlancherelCtx) -> Result<MatrixUnit> {
    if n >= ctx.dim || l >= ctx.dim {
        return Err(Error::InvalidParameter(format!(
            "matrix unit ({n}, {l}) outside truncation N = {}",
            ctx.dim
        )));
    }
    let q2 = ctx.param.q() * ctx.param.q();
    let proj = spectral_projection(l, ctx)?;
    let (ladder, weight) = if n <= l {
        let steps = (l - n) as i32;
        let w: f64 = (0..steps).map(|a| (1.0 - q2.powi(l as i32 - a)).sqrt()).product();
        (Monomial::new(steps, 0, 0), w)
    } else {
        let steps = (n - l) as i32;
        let w: f64 = (1..=steps).map(|a| (1.0 - q2.powi(l as i32 + a)).sqrt()).product();
        (Monomial::new(-steps, 0, 0), w)
    };
    let matrix = eval_monomial(&ladder, &ctx.trunc(0)) * proj / C64::new(weight, 0.0);
    let mut target = CMatrix::zeros(ctx.dim, ctx.dim);
    target[(n, l)] = C64::new(1.0, 0.0);
    let diff = &matrix - target;
    let defect = diff
        .column_iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    Ok(MatrixUnit { n, l, matrix, defect })
}

#[derive(Debug, Clone, Copy)]
pub struct GramReport {
    pub size: usize,
    pub rank: usize,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
}

impl GramReport {
    pub fn full_rank(&self) -> bool {
        self.rank == self.size
    }
}

/// Gram matrix of the fields `λ ↦ λ^w ψ(E_{n,l})` for `n, l ≤ n_max` and
/// `w = 0..M−1`, restricted to the `(n_max+1)`-corner they occupy. Full rank
/// means these fields span every truncated field on that corner.
pub fn matrix_unit_gram(n_max: usize, ctx: &PlancherelCtx) -> Result<GramReport> {
    let k = n_max + 1;
    let m = ctx.grid.size();
    let mut fields = Vec::with_capacity(m * k * k);
    for n in 0..k {
        for l in 0..k {
            let unit = compress(&build_matrix_unit(n, l, ctx)?.matrix, k);
            for w in 0..m as i32 {
                fields.push(HSField::from_fn(ctx.grid, k, |_, lambda| {
                    &unit * lambda.powi(w)
                })?);
            }
        }
    }
    let size = fields.len();
    let mut gram = CMatrix::zeros(size, size);
    for a in 0..size {
        for b in a..size {
            let v = hs_inner(&fields[a], &fields[b])?;
            gram[(a, b)] = v;
            gram[(b, a)] = v.conj();
        }
    }
    let eig = gram.symmetric_eigen();
    let max_eigenvalue = eig.eigenvalues.iter().copied().fold(f64::MIN, f64::max);
    let min_eigenvalue = eig.eigenvalues.iter().copied().fold(f64::MAX, f64::min);
    let rank = eig
        .eigenvalues
        .iter()
        .filter(|&&v| v > 1e-10 * max_eigenvalue)
        .count();
    Ok(GramReport {
        size,
        rank,
        min_eigenvalue,
        max_eigenvalue,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpoly::Letter::*;

    fn ctx(q: f64, n: usize, m: usize) -> PlancherelCtx {
        PlancherelCtx::new(QParam::new(q).unwrap(), n, m).unwrap()
    }

    fn mono(p: QParam, l: i32, n: u32, m: u32) -> QPoly {
        QPoly::monomial(p, Monomial::new(l, n, m), C64::new(1.0, 0.0))
    }

    #[test]
    fn ctx_validation() {
        let p = QParam::new(0.5).unwrap();
        assert!(matches!(PlancherelCtx::new(p, 8, 7), Err(Error::NotReflectionClosed(7))));
        assert!(PlancherelCtx::new(p, 1, 8).is_err());
    }

    #[test]
    fn transform_examples() {
        let c = ctx(0.5, 64, 8);
        let one = q_l(&QPoly::one(c.param), &c);
        let dinv = d_power(DExponent::MinusOne, c.param, 64);
        for j in 0..8 {
            assert_eq!(one.block(j), &dinv);
        }
        let gg = mono(c.param, 0, 1, 1);
        let v = hs_inner(&one, &q_l(&gg, &c)).unwrap();
        assert!((v - 0.8).norm() < 1e-10);
        let zero = q_l(&QPoly::zero(c.param), &c);
        assert_eq!(zero.norm(), 0.0);
        // ‖Q_L Λ_h(1)‖² = 1 − q^{2N}
        assert!((one.norm().powi(2) - (1.0 - 0.25f64.powi(64))).abs() < 1e-14);
    }

    #[test]
    fn isometry_examples() {
        let c = ctx(0.5, 64, 8);
        let p = c.param;
        let g = QPoly::generator(p, Gamma);
        assert!(isometry_defect(&g, &g, &c).unwrap() < 1e-10);
        let v = hs_inner(&q_l(&g, &c), &q_l(&g, &c)).unwrap();
        assert!((v - 0.75 / (1.0 - 0.0625)).norm() < 1e-10);
        assert_eq!(isometry_defect(&QPoly::zero(p), &g, &c).unwrap(), 0.0);
        let wide = mono(p, 0, 8, 0);
        assert!(matches!(
            isometry_defect(&QPoly::one(p), &wide, &c),
            Err(Error::WindingOverflow { .. })
        ));
    }

    #[test]
    fn multiplicativity_examples() {
        let c = ctx(0.5, 16, 8);
        let p = c.param;
        let g = QPoly::generator(p, Gamma);
        let gs = QPoly::generator(p, GammaStar);
        let a = QPoly::generator(p, Alpha);
        let a_s = QPoly::generator(p, AlphaStar);
        assert_eq!(multiplicativity_check(&QPoly::one(p), &a, &c).unwrap(), 0.0);
        assert!(multiplicativity_check(&g, &gs, &c).unwrap() <= 1e-12);
        assert!(multiplicativity_check(&a, &a_s, &c).unwrap() <= 1e-12);
    }

    #[test]
    fn orientation_is_calibrated_once() {
        for q in [0.5, -0.5, 0.3] {
            let c = ctx(q, 12, 8);
            let cal = calibrate_orientation(&c);
            assert_eq!(cal.orientation, Orientation::Forward);
            assert!(cal.forward_defect < 1e-12);
            assert!(cal.backward_defect > 1e-3);
        }
    }

    #[test]
    fn scaling_group_examples() {
        let c = ctx(0.5, 24, 8);
        let p = c.param;
        assert_eq!(check_stw9(&mono(p, 1, 2, 0), 0, &c).unwrap(), 0.0);
        for k in 0..8 {
            assert!(check_stw9(&QPoly::generator(p, Gamma), k, &c).unwrap() <= 1e-12);
            assert!(check_stw9(&QPoly::generator(p, Alpha), k, &c).unwrap() <= 1e-12);
        }
        let t = admissible_t(c.grid, 3, p);
        assert!(check_stw9_at(&QPoly::generator(p, Gamma), t, &c).unwrap() <= 1e-12);
        assert!(matches!(
            check_stw9_at(&QPoly::generator(p, Gamma), 0.1, &c),
            Err(Error::NonAdmissibleAngle(_))
        ));
    }

    #[test]
    fn unitary_antipode_examples() {
        for q in [0.5, -0.5] {
            let c = ctx(q, 24, 8);
            let p = c.param;
            assert_eq!(check_stw10(&QPoly::one(p), &c).unwrap(), 0.0);
            assert!(check_stw10(&QPoly::generator(p, Gamma), &c).unwrap() <= 1e-12);
            assert!(check_stw10(&mono(p, -2, 1, 3), &c).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn jtilde_is_not_decomposable_for_positive_q() {
        // a field on block 0 lands on block M/2
        let c = ctx(0.5, 4, 8);
        let mut blocks = HSField::zeros(c.grid, 4).blocks().to_vec();
        blocks[0][(1, 2)] = C64::new(1.0, 0.0);
        let x = HSField::from_blocks(c.grid, blocks).unwrap();
        assert_eq!(jtilde(&x, c.param).unwrap().support(0.0), vec![4]);
    }

    #[test]
    fn nabla_examples() {
        let c = ctx(0.5, 24, 8);
        let p = c.param;
        assert_eq!(check_nabla_tw1(&mono(p, 2, 1, 0), 0, &c).unwrap(), 0.0);
        assert!(check_nabla_tw1(&QPoly::generator(p, Alpha), 3, &c).unwrap() <= 1e-10);
        assert!(check_nabla_tw1(&mono(p, 0, 1, 1), 5, &c).unwrap() <= 1e-10);
    }

    #[test]
    fn delta_examples() {
        let c = ctx(0.5, 16, 8);
        let d = check_delta_relations(0, 0, &c).unwrap();
        assert_eq!(d.group_law, 0.0);
        assert_eq!(d.p_commute, 0.0);
        assert_eq!(d.sigma_commute, 0.0);
        assert!(d.witness.is_none());
        let d = check_delta_relations(1, 1, &c).unwrap();
        assert!(d.group_law <= 1e-12, "{d:?}");
        assert!(d.p_commute <= 1e-12, "{d:?}");
        assert!(d.sigma_commute <= 1e-12, "{d:?}");
        assert_eq!(d.witness, Some((0, 1)));
    }

    #[test]
    fn modular_conjugation_examples() {
        let c = ctx(0.5, 24, 8);
        let p = c.param;
        assert_eq!(check_modular_conjugation(&QPoly::one(p), &c).unwrap(), 0.0);
        assert!(check_modular_conjugation(&QPoly::generator(p, Gamma), &c).unwrap() <= 1e-10);
        assert!(check_modular_conjugation(&QPoly::generator(p, Alpha), &c).unwrap() <= 1e-10);
        assert!(sigma_jtilde_commutation(&c).unwrap() <= 1e-13);
    }

    #[test]
    fn matrix_unit_examples() {
        let c = ctx(0.5, 16, 8);
        let e00 = build_matrix_unit(0, 0, &c).unwrap();
        let mut p0 = CMatrix::zeros(16, 16);
        p0[(0, 0)] = C64::new(1.0, 0.0);
        assert!(crate::linalg::frobenius(&(&e00.matrix - p0)) < 1e-10);
        for (n, l) in [(2, 5), (5, 2), (3, 3)] {
            let e = build_matrix_unit(n, l, &c).unwrap();
            let et = build_matrix_unit(l, n, &c).unwrap();
            assert!(e.defect < 1e-10);
            assert!(crate::linalg::frobenius(&(e.matrix.adjoint() - et.matrix)) < 1e-10);
        }
        assert!(build_matrix_unit(16, 0, &c).is_err());
    }

    #[test]
    fn matrix_unit_times_gamma_power_picks_up_lambda() {
        // ψ(q^{−lw} E_{n,l} γ^w) = λ^w ψ(E_{n,l})
        let c = ctx(0.5, 12, 8);
        let e = build_matrix_unit(1, 3, &c).unwrap();
        for j in [1, 3] {
            let tp = c.trunc(j);
            let lambda = tp.lambda;
            for w in 1..3 {
                let gw = eval_monomial(&Monomial::new(0, w, 0), &tp);
                let lhs = &e.matrix * gw * C64::new(0.5f64.powi(-3 * w as i32), 0.0);
                let rhs = &e.matrix * lambda.powi(w as i32);
                assert!(crate::linalg::frobenius(&(lhs - rhs)) < 1e-10);
            }
        }
    }

    #[test]
    fn deep_eigenvalues_are_refused() {
        let c = ctx(0.5, 64, 8);
        assert!(matches!(spectral_projection(60, &c), Err(Error::Clustering { .. })));
    }

    #[test]
    fn small_gram_is_full_rank() {
        let c = ctx(0.5, 8, 4);
        let g = matrix_unit_gram(2, &c).unwrap();
        assert_eq!(g.size, 36);
        assert!(g.full_rank(), "{g:?}");
        assert!((g.min_eigenvalue - 1.0).abs() < 1e-8);
    }
}

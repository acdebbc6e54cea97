//! Discretized az+b machinery for real `0 < q < 1`.
//!
//! The group `Γ_q = {q^{iθ+k}} ≅ Z × T` is sampled as `k ∈ [−K, K]` and
//! `u_j = e^{2πij/M}` with `M = 2K+1`. Grid points are indexed
//! `(k + K)·M + j`. The bicharacter is `χ((k,u),(k′,u′)) = u^{k′} u′^{k}`.

use serde::Serialize;

use crate::linalg::{frobenius, op_norm, CMatrix, PosDef};
use crate::{Error, Result, C64};

pub const EPS_PINV: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AzbConfig {
    pub q: f64,
    pub k_cut: usize,
    pub m: usize,
    /// Relative threshold for the pseudo-inverse of `a`.
    pub eps_pinv: f64,
    /// Scaling constant; 1 for real `q`.
    pub nu: f64,
}

impl AzbConfig {
    pub fn new(q: f64, k_cut: usize) -> Result<Self> {
        let cfg = Self {
            q,
            k_cut,
            m: 2 * k_cut + 1,
            eps_pinv: EPS_PINV,
            nu: 1.0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.q > 0.0 && self.q < 1.0) {
            return Err(Error::InvalidParameter(format!("q = {} outside (0, 1)", self.q)));
        }
        if self.k_cut == 0 {
            return Err(Error::InvalidParameter("K must be at least 1".into()));
        }
        if self.m != 2 * self.k_cut + 1 {
            return Err(Error::InvalidParameter(format!(
                "M = {} must equal 2K+1 = {}",
                self.m,
                2 * self.k_cut + 1
            )));
        }
        if self.eps_pinv.is_nan() || self.eps_pinv < 0.0 {
            return Err(Error::InvalidParameter("eps_pinv must be nonnegative".into()));
        }
        Ok(())
    }

    pub fn grid(&self) -> GammaGrid {
        GammaGrid {
            k_cut: self.k_cut,
            m: self.m,
            q: self.q,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GammaGrid {
    pub k_cut: usize,
    pub m: usize,
    pub q: f64,
}

impl GammaGrid {
    pub fn size(&self) -> usize {
        self.m * self.m
    }

    pub fn index(&self, k: i64, j: usize) -> usize {
        (k + self.k_cut as i64) as usize * self.m + j % self.m
    }

    /// `(k, j)` of a flat index.
    pub fn point(&self, idx: usize) -> (i64, usize) {
        ((idx / self.m) as i64 - self.k_cut as i64, idx % self.m)
    }

    pub fn contains_k(&self, k: i64) -> bool {
        k.unsigned_abs() as usize <= self.k_cut
    }

    pub fn u(&self, j: usize) -> C64 {
        self.omega_pow(j as i64)
    }

    fn omega_pow(&self, e: i64) -> C64 {
        let r = e.rem_euclid(self.m as i64) as f64;
        C64::from_polar(1.0, 2.0 * std::f64::consts::PI * r / self.m as f64)
    }

    /// `γ(k, u_j) = q^k u_j`.
    pub fn value(&self, idx: usize) -> C64 {
        let (k, j) = self.point(idx);
        self.u(j) * self.q.powi(k as i32)
    }
}

/// `F_{(k,j),(k′,j′)} = χ((k,u_j),(k′,u_{j′})) / M`.
pub fn fourier_matrix(cfg: &AzbConfig) -> Result<CMatrix> {
    cfg.validate()?;
    let g = cfg.grid();
    let scale = 1.0 / cfg.m as f64;
    Ok(CMatrix::from_fn(g.size(), g.size(), |r, c| {
        let (k, j) = g.point(r);
        let (kp, jp) = g.point(c);
        g.omega_pow(j as i64 * kp + jp as i64 * k) * scale
    }))
}

/// Multiplication by the value map.
pub fn op_b(cfg: &AzbConfig) -> Result<CMatrix> {
    cfg.validate()?;
    let g = cfg.grid();
    let n = g.size();
    let mut b = CMatrix::zeros(n, n);
    for i in 0..n {
        b[(i, i)] = g.value(i);
    }
    Ok(b)
}

/// `a = F b F*`.
pub fn op_a(cfg: &AzbConfig) -> Result<CMatrix> {
    let f = fourier_matrix(cfg)?;
    Ok(&f * op_b(cfg)? * f.adjoint())
}

pub fn normality_defect(a: &CMatrix) -> f64 {
    frobenius(&(a.adjoint() * a - a * a.adjoint()))
}

#[derive(Debug, Clone)]
pub struct DePair {
    pub d: PosDef,
    pub e: PosDef,
    /// Singular values of `a` kept by the pseudo-inverse.
    pub retained: usize,
}

fn pseudo_inverse(a: &CMatrix, rel_eps: f64) -> Result<(CMatrix, usize)> {
    let svd = a.clone().svd(true, true);
    let (u, vt) = match (svd.u, svd.v_t) {
        (Some(u), Some(vt)) => (u, vt),
        _ => return Err(Error::Shape("SVD did not converge".into())),
    };
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cut = rel_eps * smax;
    let n = a.nrows();
    let mut inv_s = CMatrix::zeros(n, n);
    let mut retained = 0;
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s > cut && s > 0.0 {
            inv_s[(i, i)] = C64::new(1.0 / s, 0.0);
            retained += 1;
        }
    }
    if retained == 0 {
        return Err(Error::SpectrumStarved);
    }
    Ok((vt.adjoint() * inv_s * u.adjoint(), retained))
}

/// `E = |b|^{−1}` and `D = |q a⁺ b|^{−1}` with `a⁺` the thresholded
/// pseudo-inverse.
pub fn op_de(cfg: &AzbConfig) -> Result<DePair> {
    let g = cfg.grid();
    let b = op_b(cfg)?;
    let (a_inv, retained) = pseudo_inverse(&op_a(cfg)?, cfg.eps_pinv)?;
    let x = a_inv * &b * C64::new(cfg.q, 0.0);
    // |X|^{−1} = V Σ^{−1} V* from X = U Σ V*, without squaring X
    let svd = x.svd(false, true);
    let vt = svd.v_t.ok_or_else(|| Error::Shape("SVD did not converge".into()))?;
    if svd.singular_values.iter().any(|&s| s.is_nan() || s <= 0.0) {
        return Err(Error::SpectrumStarved);
    }
    let mut scaled = vt.adjoint();
    for (j, mut col) in scaled.column_iter_mut().enumerate() {
        col /= C64::new(svd.singular_values[j], 0.0);
    }
    let d_mat = scaled * &vt;
    let d = PosDef::from_matrix(&((&d_mat + d_mat.adjoint()) * C64::new(0.5, 0.0)))?;
    let e_vals: Vec<f64> = (0..g.size())
        .map(|i| g.q.powi(-(g.point(i).0 as i32)))
        .collect();
    let e = PosDef::from_diagonal(&e_vals)?;
    Ok(DePair { d, e, retained })
}

/// Flat indices with `|k| ≤ K − 2`.
pub fn interior_indices(g: &GammaGrid) -> Vec<usize> {
    let limit = g.k_cut.saturating_sub(2) as i64;
    (0..g.size()).filter(|&i| g.point(i).0.abs() <= limit).collect()
}

fn restrict(m: &CMatrix, idx: &[usize]) -> CMatrix {
    CMatrix::from_fn(idx.len(), idx.len(), |r, c| m[(idx[r], idx[c])])
}

/// `‖ν^{ist} D^{2is} E^{2it} − E^{2it} D^{2is}‖` restricted to interior
/// modes, per sample. `nu` overrides the configured scaling constant.
pub fn check_de_commute(
    cfg: &AzbConfig,
    pair: &DePair,
    samples: &[(f64, f64)],
    nu: Option<f64>,
) -> Vec<f64> {
    let nu = nu.unwrap_or(cfg.nu);
    let idx = interior_indices(&cfg.grid());
    samples
        .iter()
        .map(|&(s, t)| {
            let ds = pair.d.pow_imag(2.0 * s);
            let et = pair.e.pow_imag(2.0 * t);
            let phase = C64::new(0.0, s * t * nu.ln()).exp();
            let comm = (&ds * &et) * phase - &et * &ds;
            op_norm(&restrict(&comm, &idx))
        })
        .collect()
}

/// Group element `q^{dk} u_{dj}` used as a translation step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GammaStep {
    pub dk: i64,
    pub dj: i64,
}

/// `(L_γ g)(γ′) = g(γγ′)` on the grid; rows whose target leaves the
/// `k`-band are zero.
pub fn translation(g: &GammaGrid, step: GammaStep) -> CMatrix {
    let n = g.size();
    let mut l = CMatrix::zeros(n, n);
    for r in 0..n {
        let (k, j) = g.point(r);
        let kk = k + step.dk;
        if g.contains_k(kk) {
            let jj = (j as i64 + step.dj).rem_euclid(g.m as i64) as usize;
            l[(r, g.index(kk, jj))] = C64::new(1.0, 0.0);
        }
    }
    l
}

/// `‖L_γ M_f L_γ* − M_{σ_γ f}‖` on rows and columns whose translate stays
/// inside the `k`-band, with `σ_γ f(γ′) = f(γγ′)`.
pub fn covariance_shift_check(
    cfg: &AzbConfig,
    step: GammaStep,
    f: impl Fn(C64) -> C64,
) -> Result<f64> {
    cfg.validate()?;
    let g = cfg.grid();
    if step.dk.unsigned_abs() as usize > 2 * g.k_cut {
        return Err(Error::InvalidParameter(format!(
            "step dk = {} leaves the k-band [−{K}, {K}]",
            step.dk,
            K = g.k_cut
        )));
    }
    let n = g.size();
    let l = translation(&g, step);
    let mut mf = CMatrix::zeros(n, n);
    let mut msf = CMatrix::zeros(n, n);
    let gamma = g.omega_pow(step.dj) * cfg.q.powi(step.dk as i32);
    for i in 0..n {
        mf[(i, i)] = f(g.value(i));
        let (k, j) = g.point(i);
        let kk = k + step.dk;
        // γγ′ is a grid point whenever the translate stays in the band
        let shifted = if g.contains_k(kk) {
            g.value(g.index(kk, (j as i64 + step.dj).rem_euclid(g.m as i64) as usize))
        } else {
            gamma * g.value(i)
        };
        msf[(i, i)] = f(shifted);
    }
    let lhs = &l * mf * l.adjoint();
    let idx: Vec<usize> = (0..n)
        .filter(|&i| g.contains_k(g.point(i).0 + step.dk))
        .collect();
    Ok(op_norm(&(restrict(&lhs, &idx) - restrict(&msf, &idx))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unitary_defect;

    #[test]
    fn config_validation() {
        assert!(AzbConfig::new(1.0, 3).is_err());
        assert!(AzbConfig::new(0.5, 0).is_err());
        let mut c = AzbConfig::new(0.5, 3).unwrap();
        c.m = 8;
        assert!(fourier_matrix(&c).is_err());
    }

    #[test]
    fn fourier_is_unitary_with_parity_square() {
        for k in 1..=8 {
            let cfg = AzbConfig::new(0.5, k).unwrap();
            let f = fourier_matrix(&cfg).unwrap();
            assert!(unitary_defect(&f) <= 1e-12, "K = {k}");
        }
        let cfg = AzbConfig::new(0.5, 3).unwrap();
        let g = cfg.grid();
        let f = fourier_matrix(&cfg).unwrap();
        let f2 = &f * &f;
        for r in 0..g.size() {
            let (k, j) = g.point(r);
            let target = g.index(-k, (g.m - j) % g.m);
            for c in 0..g.size() {
                let want = if c == target { 1.0 } else { 0.0 };
                assert!((f2[(r, c)] - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn fourier_of_uniform_delta() {
        let cfg = AzbConfig::new(0.5, 2).unwrap();
        let g = cfg.grid();
        let f = fourier_matrix(&cfg).unwrap();
        let mut v = nalgebra::DVector::<C64>::zeros(g.size());
        for j in 0..g.m {
            v[g.index(0, j)] = C64::new(1.0 / (g.m as f64).sqrt(), 0.0);
        }
        let w = &f * v;
        for i in 0..g.size() {
            let (k, _) = g.point(i);
            let want = if k == 0 { 1.0 / (g.m as f64).sqrt() } else { 0.0 };
            assert!((w[i] - want).norm() < 1e-12);
        }
    }

    #[test]
    fn b_entries() {
        let cfg = AzbConfig::new(0.5, 3).unwrap();
        let g = cfg.grid();
        let b = op_b(&cfg).unwrap();
        let i0 = g.index(0, 0);
        assert_eq!(b[(i0, i0)], C64::new(1.0, 0.0));
        for i in 0..g.size() {
            assert!((b[(i, i)].norm() - 0.5f64.powi(g.point(i).0 as i32)).abs() < 1e-14);
        }
        // u = i needs M divisible by 4
        let cfg = AzbConfig { q: 0.5, k_cut: 1, m: 4, eps_pinv: EPS_PINV, nu: 1.0 };
        let g = cfg.grid();
        let v = g.u(1) * cfg.q.powi(1);
        assert!((v - C64::new(0.0, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn a_is_conjugate_of_b() {
        let cfg = AzbConfig::new(0.5, 3).unwrap();
        let a = op_a(&cfg).unwrap();
        let b = op_b(&cfg).unwrap();
        let f = fourier_matrix(&cfg).unwrap();
        let mut sa: Vec<f64> = a.clone().svd(false, false).singular_values.iter().copied().collect();
        let mut sb: Vec<f64> = b.clone().svd(false, false).singular_values.iter().copied().collect();
        sa.sort_by(f64::total_cmp);
        sb.sort_by(f64::total_cmp);
        for (x, y) in sa.iter().zip(&sb) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!(frobenius(&(f.adjoint() * &a * &f - &b)) < 1e-12);
        assert!(normality_defect(&a) < 1e-10);
    }

    #[test]
    fn e_is_exact() {
        let cfg = AzbConfig::new(0.5, 4).unwrap();
        let g = cfg.grid();
        let pair = op_de(&cfg).unwrap();
        assert_eq!(pair.retained, g.size());
        for (i, &v) in pair.e.eigenvalues().iter().enumerate() {
            assert_eq!(v, 0.5f64.powi(-(g.point(i).0 as i32)));
        }
        assert!(pair.d.min_eigenvalue() > 0.0);
    }

    #[test]
    fn starved_threshold_is_a_config_error() {
        let mut cfg = AzbConfig::new(0.5, 2).unwrap();
        cfg.eps_pinv = 2.0;
        assert!(matches!(op_de(&cfg), Err(Error::SpectrumStarved)));
    }

    #[test]
    fn commutation_samples() {
        let cfg = AzbConfig::new(0.5, 4).unwrap();
        let pair = op_de(&cfg).unwrap();
        let d = check_de_commute(&cfg, &pair, &[(0.0, 1.0), (1.0, 0.0)], None);
        assert!(d.iter().all(|&x| x <= 1e-14), "{d:?}");
        let base = check_de_commute(&cfg, &pair, &[(1.0, 1.0)], None)[0];
        let nu2 = check_de_commute(&cfg, &pair, &[(1.0, 1.0)], Some(2.0))[0];
        let expected = (C64::new(0.0, 2f64.ln()).exp() - 1.0).norm();
        assert!((nu2 - expected).abs() <= base + 1e-10);
    }

    #[test]
    fn covariance_examples() {
        let cfg = AzbConfig::new(0.5, 3).unwrap();
        let f = |z: C64| z / (C64::new(1.0, 0.0) + z.norm_sqr());
        let id = GammaStep { dk: 0, dj: 0 };
        assert_eq!(covariance_shift_check(&cfg, id, f).unwrap(), 0.0);
        assert_eq!(covariance_shift_check(&cfg, GammaStep { dk: 0, dj: 2 }, f).unwrap(), 0.0);
        assert!(covariance_shift_check(&cfg, GammaStep { dk: 1, dj: 0 }, f).unwrap() <= 1e-12);
        assert!(covariance_shift_check(&cfg, GammaStep { dk: 7, dj: 0 }, f).is_err());
    }
}

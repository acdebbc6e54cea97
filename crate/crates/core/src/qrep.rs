//! Truncated irreducible representations of C(SU_q(2)).
//!
//! `ψ^{2,λ}` acts on `ℓ²(Z₊)`, truncated here to `span{φ_0, …, φ_{N−1}}`:
//!
//! ```text
//! ψ(α)φ_k  = √(1 − q^{2k}) φ_{k−1}        ψ(γ)φ_k  = λ q^k φ_k
//! ψ(α*)φ_k = √(1 − q^{2(k+1)}) φ_{k+1}    ψ(γ*)φ_k = λ̄ q^k φ_k
//! ```
//!
//! with `φ_{−1} = 0` and `φ_N` dropped, so `α*` annihilates `φ_{N−1}`.
//! Relations involving `α α*` fail only on that top vector; comparisons
//! compress it away.

use nalgebra::DMatrix;

use crate::linalg::{compress, diag, op_norm, CMatrix};
use crate::qpoly::{Letter, Monomial, QParam, QPoly};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncParams {
    pub param: QParam,
    pub dim: usize,
    pub lambda: C64,
}

impl TruncParams {
    pub fn new(param: QParam, dim: usize, lambda: C64) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidParameter(format!("truncation N = {dim} < 2")));
        }
        if (lambda.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "|λ| = {} is not 1",
                lambda.norm()
            )));
        }
        Ok(Self { param, dim, lambda })
    }
}

/// Operator `φ_k ↦ w[k] φ_{k+offset}` on the truncated space.
#[derive(Debug, Clone)]
struct WeightedShift {
    offset: isize,
    w: Vec<C64>,
}

impl WeightedShift {
    fn identity(n: usize) -> Self {
        Self {
            offset: 0,
            w: vec![C64::new(1.0, 0.0); n],
        }
    }

    fn generator(letter: Letter, tp: &TruncParams) -> Self {
        let q = tp.param.q();
        let q2 = q * q;
        let n = tp.dim;
        let (offset, w): (isize, Vec<C64>) = match letter {
            Letter::Alpha => (
                -1,
                (0..n)
                    .map(|k| C64::new((1.0 - q2.powi(k as i32)).sqrt(), 0.0))
                    .collect(),
            ),
            Letter::AlphaStar => (
                1,
                (0..n)
                    .map(|k| {
                        if k + 1 < n {
                            C64::new((1.0 - q2.powi(k as i32 + 1)).sqrt(), 0.0)
                        } else {
                            C64::new(0.0, 0.0)
                        }
                    })
                    .collect(),
            ),
            Letter::Gamma => (0, (0..n).map(|k| tp.lambda * q.powi(k as i32)).collect()),
            Letter::GammaStar => (
                0,
                (0..n).map(|k| tp.lambda.conj() * q.powi(k as i32)).collect(),
            ),
        };
        Self { offset, w }
    }

    /// Matrix product `self · rhs`.
    fn compose(&self, rhs: &WeightedShift) -> Self {
        let n = self.w.len();
        let w = (0..n)
            .map(|k| {
                let mid = k as isize + rhs.offset;
                if (0..n as isize).contains(&mid) {
                    rhs.w[k] * self.w[mid as usize]
                } else {
                    C64::new(0.0, 0.0)
                }
            })
            .collect();
        Self {
            offset: self.offset + rhs.offset,
            w,
        }
    }

    fn add_into(&self, out: &mut CMatrix, c: C64) {
        let n = self.w.len() as isize;
        for (k, &wk) in self.w.iter().enumerate() {
            let row = k as isize + self.offset;
            if (0..n).contains(&row) {
                out[(row as usize, k)] += c * wk;
            }
        }
    }
}

fn monomial_shift(mono: &Monomial, tp: &TruncParams) -> WeightedShift {
    let mut acc = WeightedShift::identity(tp.dim);
    for letter in mono.letters() {
        acc = acc.compose(&WeightedShift::generator(letter, tp));
    }
    acc
}

/// Matrix of a generator in the basis `φ_0..φ_{N−1}`.
pub fn gen_matrix(letter: Letter, tp: &TruncParams) -> CMatrix {
    let mut out = CMatrix::zeros(tp.dim, tp.dim);
    WeightedShift::generator(letter, tp).add_into(&mut out, C64::new(1.0, 0.0));
    out
}

/// Generator matrix by tag (`a`, `a*`, `g`, `g*` or the long names).
pub fn gen_matrix_by_tag(tag: &str, tp: &TruncParams) -> Result<CMatrix> {
    Ok(gen_matrix(tag.parse()?, tp))
}

/// `ψ^{2,λ}(p)`, each PBW monomial evaluated as the ordered product of its
/// generator matrices.
pub fn eval_poly(p: &QPoly, tp: &TruncParams) -> CMatrix {
    let mut out = CMatrix::zeros(tp.dim, tp.dim);
    for (mono, &c) in p.terms() {
        monomial_shift(mono, tp).add_into(&mut out, c);
    }
    out
}

pub fn eval_monomial(mono: &Monomial, tp: &TruncParams) -> CMatrix {
    let mut out = CMatrix::zeros(tp.dim, tp.dim);
    monomial_shift(mono, tp).add_into(&mut out, C64::new(1.0, 0.0));
    out
}

/// Value of a generator in the one-dimensional representation `ψ^{1,ρ}`.
pub fn one_dim_rep(letter: Letter, rho: C64) -> C64 {
    match letter {
        Letter::Alpha => rho,
        Letter::AlphaStar => rho.conj(),
        Letter::Gamma | Letter::GammaStar => C64::new(0.0, 0.0),
    }
}

/// `ψ^{1,ρ}` extended multiplicatively to a polynomial.
pub fn one_dim_eval(p: &QPoly, rho: C64) -> C64 {
    p.terms()
        .map(|(mono, &c)| {
            mono.letters()
                .into_iter()
                .fold(c, |acc, l| acc * one_dim_rep(l, rho))
        })
        .sum()
}

/// Which power of `D_λ` to build.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DExponent {
    One,
    MinusOne,
    /// The unitary `D^{2it}`.
    TwoIt(f64),
}

/// Diagonal of `D_λ = (1 − q²)^{−1/2} diag(1, |q|^{−1}, |q|^{−2}, …)`.
pub fn d_diagonal(param: QParam, n: usize) -> Vec<f64> {
    let c = (1.0 - param.q() * param.q()).powf(-0.5);
    (0..n).map(|k| c * param.abs().powi(-(k as i32))).collect()
}

/// `D^s` for `s = ±1`, or `D^{2it} = (1 − q²)^{−it} diag(|q|^{−2itk})`.
/// Independent of `λ`.
pub fn d_power(exp: DExponent, param: QParam, n: usize) -> CMatrix {
    let entries: Vec<C64> = match exp {
        DExponent::One => d_diagonal(param, n)
            .into_iter()
            .map(|v| C64::new(v, 0.0))
            .collect(),
        DExponent::MinusOne => d_diagonal(param, n)
            .into_iter()
            .map(|v| C64::new(1.0 / v, 0.0))
            .collect(),
        DExponent::TwoIt(t) => {
            let ln_c = -0.5 * (1.0 - param.q() * param.q()).ln();
            (0..n)
                .map(|k| C64::new(0.0, 2.0 * t * (ln_c - k as f64 * param.ln_abs())).exp())
                .collect()
        }
    };
    diag(&entries)
}

/// Haar state through the representation side:
/// `(1 − q²) (1/M) Σ_j Σ_{k<N} q^{2k} ⟨φ_k, ψ^{2,λ_j}(p) φ_k⟩` with `λ_j` the
/// `M`-th roots of unity.
pub fn haar_numeric(p: &QPoly, n: usize, m: usize) -> Result<C64> {
    let winding = p.max_winding();
    if m == 0 || (m as i64) <= 2 * winding {
        return Err(Error::WindingOverflow { winding, grid: m });
    }
    let param = p.param();
    let q2 = param.q() * param.q();
    let mut total = C64::new(0.0, 0.0);
    for j in 0..m {
        let lambda = C64::from_polar(1.0, std::f64::consts::TAU * j as f64 / m as f64);
        let tp = TruncParams::new(param, n, lambda)?;
        for (mono, &c) in p.terms() {
            if mono.a_exp != 0 {
                continue;
            }
            let ws = monomial_shift(mono, &tp);
            let trace: C64 = ws
                .w
                .iter()
                .enumerate()
                .map(|(k, &wk)| wk * q2.powi(k as i32))
                .sum();
            total += c * trace;
        }
    }
    Ok(total * (1.0 - q2) / m as f64)
}

/// Defects of the defining relations evaluated on free products of the
/// truncated generator matrices.
#[derive(Debug, Clone, Copy)]
pub struct RelationDefects {
    /// `‖P_c ψ(α*α + γ*γ − 1) P_c‖`
    pub unit_left: f64,
    /// `‖P_c ψ(αα* + q²γγ* − 1) P_c‖`
    pub unit_right: f64,
    /// Uncompressed `‖ψ(αα* + q²γγ* − 1)‖`; equals `1 − q^{2N}`.
    pub unit_right_full: f64,
    /// `‖ψ(γ)ψ(γ*) − ψ(γ*)ψ(γ)‖`
    pub normality: f64,
    /// `‖ψ(α)ψ(γ) − qψ(γ)ψ(α)‖` and `‖ψ(α)ψ(γ*) − qψ(γ*)ψ(α)‖`, maximum.
    pub commutation: f64,
}

pub fn relation_defects(tp: &TruncParams) -> RelationDefects {
    let n = tp.dim;
    let q = tp.param.q();
    let a = gen_matrix(Letter::Alpha, tp);
    let a_s = gen_matrix(Letter::AlphaStar, tp);
    let g = gen_matrix(Letter::Gamma, tp);
    let g_s = gen_matrix(Letter::GammaStar, tp);
    let id = DMatrix::identity(n, n);
    let q2 = C64::new(q * q, 0.0);
    let left = &a_s * &a + &g_s * &g - &id;
    let right = &a * &a_s + (&g * &g_s) * q2 - &id;
    let qc = C64::new(q, 0.0);
    RelationDefects {
        unit_left: op_norm(&compress(&left, n - 1)),
        unit_right: op_norm(&compress(&right, n - 1)),
        unit_right_full: op_norm(&right),
        normality: op_norm(&(&g * &g_s - &g_s * &g)),
        commutation: op_norm(&(&a * &g - (&g * &a) * qc))
            .max(op_norm(&(&a * &g_s - (&g_s * &a) * qc))),
    }
}

//! Dense complex linear algebra helpers shared by the numerical modules.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::{Error, Result, C64};

pub type CMatrix = DMatrix<C64>;

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest singular value.
pub fn op_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

pub fn hermitian_defect(m: &CMatrix) -> f64 {
    frobenius(&(m - m.adjoint()))
}

pub fn unitary_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    frobenius(&(m * m.adjoint() - CMatrix::identity(n, n)))
}

pub fn diag(entries: &[C64]) -> CMatrix {
    CMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(entries))
}

/// Top-left `k × k` block.
pub fn compress(m: &CMatrix, k: usize) -> CMatrix {
    m.view((0, 0), (k, k)).into_owned()
}

/// Positive-definite matrix kept in spectral form `V diag(λ) V*`.
#[derive(Debug, Clone)]
pub struct PosDef {
    vecs: CMatrix,
    vals: Vec<f64>,
    diagonal: bool,
}

impl PosDef {
    /// Spectral decomposition of a Hermitian matrix; fails unless every
    /// eigenvalue is strictly positive.
    pub fn from_matrix(m: &CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::Shape(format!("{}×{} is not square", m.nrows(), m.ncols())));
        }
        let scale = frobenius(m).max(1.0);
        if hermitian_defect(m) > 1e-10 * scale {
            return Err(Error::NotPositive("matrix is not Hermitian".into()));
        }
        let herm = (m + m.adjoint()).scale(0.5);
        let eig = herm.symmetric_eigen();
        let vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        if let Some(bad) = vals.iter().find(|&&v| v <= 0.0 || !v.is_finite()) {
            return Err(Error::NotPositive(format!("eigenvalue {bad}")));
        }
        Ok(Self {
            vecs: eig.eigenvectors,
            vals,
            diagonal: false,
        })
    }

    /// Diagonal positive matrix; functional calculus stays exactly diagonal.
    pub fn from_diagonal(vals: &[f64]) -> Result<Self> {
        if vals.is_empty() {
            return Err(Error::Shape("empty diagonal".into()));
        }
        if let Some(bad) = vals.iter().find(|&&v| v <= 0.0 || !v.is_finite()) {
            return Err(Error::NotPositive(format!("eigenvalue {bad}")));
        }
        Ok(Self {
            vecs: CMatrix::identity(vals.len(), vals.len()),
            vals: vals.to_vec(),
            diagonal: true,
        })
    }

    pub fn dim(&self) -> usize {
        self.vals.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.vals
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.vals.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `f(self)` for a scalar function of the eigenvalues.
    pub fn apply(&self, f: impl Fn(f64) -> C64) -> CMatrix {
        let fv: Vec<C64> = self.vals.iter().map(|&v| f(v)).collect();
        if self.diagonal {
            return diag(&fv);
        }
        let mut scaled = self.vecs.clone();
        for (j, mut col) in scaled.column_iter_mut().enumerate() {
            col *= fv[j];
        }
        scaled * self.vecs.adjoint()
    }

    /// `self^{it}`.
    pub fn pow_imag(&self, t: f64) -> CMatrix {
        self.apply(|v| C64::new(0.0, t * v.ln()).exp())
    }

    /// `self^s` for real `s`.
    pub fn pow_real(&self, s: f64) -> CMatrix {
        self.apply(|v| C64::new(v.powf(s), 0.0))
    }

    pub fn matrix(&self) -> CMatrix {
        self.pow_real(1.0)
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        if c <= 0.0 {
            return Err(Error::NotPositive(format!("scale {c}")));
        }
        Ok(Self {
            vecs: self.vecs.clone(),
            vals: self.vals.iter().map(|v| v * c).collect(),
            diagonal: self.diagonal,
        })
    }
}

pub fn random_complex_gaussian<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> CMatrix {
    CMatrix::from_fn(n, m, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of
/// `diag(R)` absorbed into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let g = random_complex_gaussian(rng, n, n);
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let g = random_complex_gaussian(rng, n, n);
    (&g + g.adjoint()).scale(0.5)
}

/// Random positive-definite matrix `U diag(e^{x_j}) U*` with `x_j ~ N(0, 1)`.
pub fn random_posdef<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let u = random_unitary(rng, n);
    let vals: Vec<C64> = (0..n)
        .map(|_| {
            let x: f64 = rng.sample(StandardNormal);
            C64::new(x.exp(), 0.0)
        })
        .collect();
    let m = &u * diag(&vals) * u.adjoint();
    (&m + m.adjoint()).scale(0.5)
}

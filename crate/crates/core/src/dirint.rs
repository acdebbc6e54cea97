//! Circle-sampled direct integral `∫⊕ HS(H_λ) dμ(λ)`.
//!
//! The normalized Lebesgue measure is replaced by `M` equally weighted
//! points `λ_j = e^{2πij/M}`. A vector of the direct integral is an
//! [`HSField`]: one `N × N` block per grid point. Decomposable operators
//! `a ⊗ bᵀ` act on a block `S` as `S ↦ a S b` ([`DecompOp`]).

use crate::linalg::{compress, frobenius, CMatrix};
use crate::qpoly::QParam;
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CircleGrid {
    m: usize,
}

impl CircleGrid {
    /// Grid of `m ≥ 1` points. Reflection `λ ↦ −λ` needs `m` even; see
    /// [`CircleGrid::is_reflection_closed`].
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter("circle grid needs at least one point".into()));
        }
        Ok(Self { m })
    }

    /// Grid satisfying the reflection-closure invariant (even `m`).
    pub fn even(m: usize) -> Result<Self> {
        if m == 0 || !m.is_multiple_of(2) {
            return Err(Error::NotReflectionClosed(m));
        }
        Ok(Self { m })
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn weight(&self) -> f64 {
        1.0 / self.m as f64
    }

    pub fn point(&self, j: usize) -> C64 {
        C64::from_polar(1.0, std::f64::consts::TAU * j as f64 / self.m as f64)
    }

    pub fn points(&self) -> Vec<C64> {
        (0..self.m).map(|j| self.point(j)).collect()
    }

    pub fn is_reflection_closed(&self) -> bool {
        self.m.is_multiple_of(2)
    }

    fn wrap(&self, j: i64) -> usize {
        j.rem_euclid(self.m as i64) as usize
    }
}

/// Field of `N × N` blocks over a [`CircleGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct HSField {
    grid: CircleGrid,
    dim: usize,
    blocks: Vec<CMatrix>,
}

impl HSField {
    pub fn zeros(grid: CircleGrid, dim: usize) -> Self {
        Self {
            grid,
            dim,
            blocks: vec![CMatrix::zeros(dim, dim); grid.size()],
        }
    }

    pub fn from_blocks(grid: CircleGrid, blocks: Vec<CMatrix>) -> Result<Self> {
        if blocks.len() != grid.size() {
            return Err(Error::Shape(format!(
                "{} blocks for a grid of {}",
                blocks.len(),
                grid.size()
            )));
        }
        let dim = blocks.first().map(|b| b.nrows()).unwrap_or(0);
        if blocks.iter().any(|b| b.nrows() != dim || b.ncols() != dim) {
            return Err(Error::Shape("blocks differ in dimension".into()));
        }
        Ok(Self { grid, dim, blocks })
    }

    /// Field whose block at `λ_j` is `f(j, λ_j)`.
    pub fn from_fn(grid: CircleGrid, dim: usize, mut f: impl FnMut(usize, C64) -> CMatrix) -> Result<Self> {
        let blocks: Vec<CMatrix> = (0..grid.size()).map(|j| f(j, grid.point(j))).collect();
        if blocks.iter().any(|b| b.nrows() != dim) {
            return Err(Error::Shape(format!("expected {dim}×{dim} blocks")));
        }
        Self::from_blocks(grid, blocks)
    }

    pub fn constant(grid: CircleGrid, block: CMatrix) -> Result<Self> {
        Self::from_blocks(grid, vec![block; grid.size()])
    }

    pub fn grid(&self) -> CircleGrid {
        self.grid
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn block(&self, j: usize) -> &CMatrix {
        &self.blocks[j]
    }

    fn check_shape(&self, other: &HSField) -> Result<()> {
        if self.grid != other.grid || self.dim != other.dim {
            return Err(Error::Shape(format!(
                "field ({}, N={}) vs ({}, N={})",
                self.grid.size(),
                self.dim,
                other.grid.size(),
                other.dim
            )));
        }
        Ok(())
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            grid: self.grid,
            dim: self.dim,
            blocks: self.blocks.iter().map(|b| b * c).collect(),
        }
    }

    pub fn try_sub(&self, other: &HSField) -> Result<Self> {
        self.check_shape(other)?;
        Ok(Self {
            grid: self.grid,
            dim: self.dim,
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn try_add(&self, other: &HSField) -> Result<Self> {
        self.check_shape(other)?;
        Ok(Self {
            grid: self.grid,
            dim: self.dim,
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a + b).collect(),
        })
    }

    /// Keeps the top-left `k × k` corner of every block.
    pub fn compress(&self, k: usize) -> Self {
        let k = k.min(self.dim);
        Self {
            grid: self.grid,
            dim: k,
            blocks: self.blocks.iter().map(|b| compress(b, k)).collect(),
        }
    }

    pub fn norm(&self) -> f64 {
        hs_inner(self, self).map(|z| z.re.max(0.0).sqrt()).unwrap_or(0.0)
    }

    /// Largest blockwise Frobenius distance.
    pub fn distance(&self, other: &HSField) -> Result<f64> {
        self.check_shape(other)?;
        Ok(self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| frobenius(&(a - b)))
            .fold(0.0, f64::max))
    }

    /// Indices of blocks with Frobenius norm above `tol`.
    pub fn support(&self, tol: f64) -> Vec<usize> {
        (0..self.blocks.len())
            .filter(|&j| frobenius(&self.blocks[j]) > tol)
            .collect()
    }
}

/// `(1/M) Σ_j Tr(x_j* y_j)`.
pub fn hs_inner(x: &HSField, y: &HSField) -> Result<C64> {
    x.check_shape(y)?;
    let mut total = C64::new(0.0, 0.0);
    for (a, b) in x.blocks.iter().zip(&y.blocks) {
        total += a.iter().zip(b.iter()).map(|(u, v)| u.conj() * v).sum::<C64>();
    }
    Ok(total * x.grid.weight())
}

/// Decomposable operator `S_j ↦ A_j S_j B_j`.
#[derive(Debug, Clone)]
pub struct DecompOp {
    grid: CircleGrid,
    left: Vec<CMatrix>,
    right: Vec<CMatrix>,
}

impl DecompOp {
    pub fn new(grid: CircleGrid, left: Vec<CMatrix>, right: Vec<CMatrix>) -> Result<Self> {
        if left.len() != grid.size() || right.len() != grid.size() {
            return Err(Error::Shape("one (A_j, B_j) pair per grid point required".into()));
        }
        Ok(Self { grid, left, right })
    }

    pub fn identity(grid: CircleGrid, dim: usize) -> Self {
        let id = CMatrix::identity(dim, dim);
        Self {
            grid,
            left: vec![id.clone(); grid.size()],
            right: vec![id; grid.size()],
        }
    }

    /// `A_j ⊗ 1`: the left leg only.
    pub fn left_only(grid: CircleGrid, left: Vec<CMatrix>) -> Result<Self> {
        let dim = left.first().map(|a| a.nrows()).unwrap_or(0);
        let right = vec![CMatrix::identity(dim, dim); left.len()];
        Self::new(grid, left, right)
    }

    /// The same pair `(A, B)` at every grid point.
    pub fn sandwich(grid: CircleGrid, a: CMatrix, b: CMatrix) -> Self {
        Self {
            grid,
            left: vec![a; grid.size()],
            right: vec![b; grid.size()],
        }
    }

    pub fn apply(&self, x: &HSField) -> Result<HSField> {
        if x.grid != self.grid {
            return Err(Error::Shape("operator and field live on different grids".into()));
        }
        let blocks = x
            .blocks
            .iter()
            .zip(self.left.iter().zip(&self.right))
            .map(|(s, (a, b))| {
                if a.ncols() != s.nrows() || s.ncols() != b.nrows() {
                    return Err(Error::Shape(format!(
                        "block {}×{} against operator legs {}×{}, {}×{}",
                        s.nrows(),
                        s.ncols(),
                        a.nrows(),
                        a.ncols(),
                        b.nrows(),
                        b.ncols()
                    )));
                }
                Ok(a * s * b)
            })
            .collect::<Result<Vec<_>>>()?;
        HSField::from_blocks(self.grid, blocks)
    }
}

/// `Σ`: blockwise adjoint. Antilinear involution.
pub fn flip_sigma(x: &HSField) -> HSField {
    HSField {
        grid: x.grid,
        dim: x.dim,
        blocks: x.blocks.iter().map(|b| b.adjoint()).collect(),
    }
}

/// `(rotate(x, s))_j = x_{(j+s) mod M}`.
pub fn rotate(x: &HSField, s: i64) -> HSField {
    let m = x.grid.size() as i64;
    HSField {
        grid: x.grid,
        dim: x.dim,
        blocks: (0..m)
            .map(|j| x.blocks[x.grid.wrap(j + s)].clone())
            .collect(),
    }
}

/// The `t` whose `|q|^{2it}` is the grid rotation by `k` steps:
/// `2t ln|q| = 2πk/M`.
pub fn admissible_t(grid: CircleGrid, k: i64, param: QParam) -> f64 {
    std::f64::consts::PI * k as f64 / (grid.size() as f64 * param.ln_abs())
}

/// Inverse of [`admissible_t`]: the step count for a grid-exact `t`.
pub fn steps_for_t(grid: CircleGrid, t: f64, param: QParam) -> Result<i64> {
    let k = t * grid.size() as f64 * param.ln_abs() / std::f64::consts::PI;
    let rounded = k.round();
    if (k - rounded).abs() > 1e-9 * rounded.abs().max(1.0) {
        return Err(Error::NonAdmissibleAngle(t));
    }
    Ok(rounded as i64)
}

/// `J̃`: block at `λ` becomes the entrywise conjugate of the block at
/// `−sgn(q)λ`.
pub fn jtilde(x: &HSField, param: QParam) -> Result<HSField> {
    let m = x.grid.size();
    let shift = if param.sign() > 0.0 {
        if !x.grid.is_reflection_closed() {
            return Err(Error::NotReflectionClosed(m));
        }
        m / 2
    } else {
        0
    };
    Ok(HSField {
        grid: x.grid,
        dim: x.dim,
        blocks: (0..m)
            .map(|j| x.blocks[(j + shift) % m].map(|z| z.conj()))
            .collect(),
    })
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown identifier `{name}` at position {pos}")]
    UnknownIdentifier { name: String, pos: usize },

    #[error("unknown generator tag `{0}`")]
    UnknownGenerator(String),

    #[error("deformation parameters differ: {0} vs {1}")]
    ParamMismatch(f64, f64),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("winding {winding} is not resolved by a circle grid of size {grid}")]
    WindingOverflow { winding: i64, grid: usize },

    #[error("grid of size {0} is not closed under λ ↦ -λ")]
    NotReflectionClosed(usize),

    #[error("t = {0} is not a grid-exact rotation angle")]
    NonAdmissibleAngle(f64),

    #[error("matrix is not unitary (defect {0:e})")]
    NotUnitary(f64),

    #[error("matrix is not positive definite: {0}")]
    NotPositive(String),

    #[error("eigenvalue {target} is not resolved (gap {gap:e})")]
    Clustering { target: f64, gap: f64 },

    #[error("pseudo-inverse threshold removes every singular value")]
    SpectrumStarved,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

//! Desk-scale computations for the compact quantum group SU_q(2) and the
//! quantum az+b group.
//!
//! The crate is organized bottom-up:
//!
//! * [`qpoly`]: exact symbolic *-algebra of Pol(SU_q(2)) in the PBW basis,
//!   Haar state, modular group, scaling group and unitary antipode.
//! * [`qrep`]: truncated irreducible representations, the weight operators
//!   `D_λ` and a representation-side Haar evaluation.
//! * [`dirint`]: the circle-sampled direct integral of Hilbert–Schmidt
//!   spaces, decomposable operators, the flip `Σ`, rotations and `J̃`.
//! * [`plancherel`]: the transform `Q_L` and the transported-operator checks.
//! * [`weylcheck`]: finite-dimensional operator lemmas, clock-shift pairs,
//!   the scaling-constant obstruction search and the field predicate table.
//! * [`azb`]: the `Z×T` grid model of the real-q az+b group.
//! * [`cli`]: run configuration, suite runner and report emission.

pub mod azb;
pub mod cli;
pub mod dirint;
pub mod error;
pub mod linalg;
pub mod plancherel;
pub mod qpoly;
pub mod qrep;
pub mod weylcheck;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

//! Exact linear algebra over ℚ(i): scalars, dense matrices and subspaces in
//! canonical echelon form.

pub mod matrix;
pub mod scalar;
pub mod sparse;
pub mod subspace;

pub use matrix::{Matrix, Vector};
pub use scalar::Scalar;
pub use subspace::{Quotient, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, thiserror::Error)]
pub enum ExactError {
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("matrix is singular")]
    Singular,
    #[error("vector is not in the subspace")]
    NotInSubspace,
    #[error("matrix is not nilpotent: its {power}-th power is nonzero")]
    NotNilpotent { power: u32 },
    #[error("matrix is not unipotent: (m - id)^{power} is nonzero")]
    NotUnipotent { power: u32 },
}

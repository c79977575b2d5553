use thiserror::Error;

use crate::algebra::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("algebra validation failed:\n{0}")]
    InvalidAlgebra(ValidationReport),

    #[error("action validation failed:\n{0}")]
    InvalidAction(ValidationReport),

    #[error("degenerate plane: gram determinant {gram:e} below threshold {threshold:e}")]
    DegeneratePlane { gram: f64, threshold: f64 },

    #[error("action is not isometric (b(X) is not skew-adjoint)")]
    NotIsometric,

    #[error("inner product is not Ad-invariant")]
    NotAdInvariant,

    #[error("vector field is not divergence free (max divergence coefficient {residual:e})")]
    NotDivergenceFree { residual: f64 },

    #[error("implicit midpoint iteration did not converge at step {step} (update {residual:e})")]
    MidpointDivergence { step: usize, residual: f64 },

    #[error("plane sampling exhausted after {attempts} attempts for {requested} planes")]
    SamplingExhausted { requested: usize, attempts: usize },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Everything that can go wrong while building bodies or evaluating divergences.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid generator: {0}")]
    InvalidGenerator(String),
    #[error("invalid body: {0}")]
    InvalidBody(String),
    #[error("direction is not a unit vector (norm {0})")]
    NotUnit(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("singular linear map")]
    SingularMap,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("negative factor {0} under the root of a mixed divergence")]
    NegativeMixedFactor(f64),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

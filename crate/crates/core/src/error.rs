use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("matrix does not define a morphism: relation row {row} is not sent into the target relations")]
    IllDefinedMorphism { row: usize },
    #[error("morphism is not injective")]
    NotInjective,
    #[error("morphism is not surjective")]
    NotSurjective,
    #[error("sequence is not exact: {0}")]
    NotExact(String),
    #[error("natural transformation square does not commute")]
    NonCommutingSquare,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("functor is not left exact on the probe sequence: {0}")]
    NotLeftExact(String),
    #[error("decomposition is not verified: {0}")]
    UnverifiedDecomposition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;

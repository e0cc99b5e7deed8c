use crate::algebra::GenId;

/// Errors shared across the algebra, supermatrix and decomposition layers.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("unknown generator id {0}")]
    UnknownGenerator(GenId),

    #[error("operands belong to different generator tables")]
    IncompatibleContext,

    #[error("not invertible: {0}")]
    NotInvertible(String),

    #[error("parity error: {0}")]
    Parity(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

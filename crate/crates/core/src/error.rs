use thiserror::Error;

/// Errors raised by the plant, filter and analysis layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("insufficient history: need {needed} past samples, have {available}")]
    InsufficientHistory { needed: usize, available: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("sequence length {len} must exceed memory order {m}")]
    BadLength { len: usize, m: usize },

    #[error("variant `{0}` does not support this operation")]
    UnsupportedVariant(&'static str),

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("correlation matrix is singular (smallest eigenvalue {min_eigenvalue:e} + ridge {ridge:e} <= 1e-12)")]
    SingularCorrelation { min_eigenvalue: f64, ridge: f64 },

    #[error("real power undefined: {0}")]
    DomainError(String),
}

pub type Result<T> = std::result::Result<T, Error>;

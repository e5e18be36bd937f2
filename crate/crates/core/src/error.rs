use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("size limit exceeded: {detail}")]
    SizeLimit { detail: String },

    #[error("matrix is not a valid density operator: {0}")]
    InvalidDensity(String),

    #[error("conditional probability undefined: conditioning event has probability {prob:e}")]
    ZeroDenominator { prob: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

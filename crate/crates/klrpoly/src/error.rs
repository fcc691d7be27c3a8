use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("rank {got} too small: need at least {min}")]
    RankTooSmall { min: usize, got: usize },

    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("generator index {index} out of range 1..={max}")]
    GeneratorOutOfRange { index: usize, max: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("word is not reduced")]
    NotReduced,

    #[error("capacity exceeded: {what} supports n <= {max}, got {got}")]
    Capacity {
        what: &'static str,
        max: usize,
        got: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("exponent out of range: {0}")]
    ExponentOutOfRange(String),

    #[error("division by zero polynomial")]
    DivisionByZero,

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("cache file line {line}: {msg}")]
    CacheFormat { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

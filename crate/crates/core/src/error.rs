use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GrandError {
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("index {index} out of range for length {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("support must be strictly ascending")]
    UnsortedSupport,

    #[error("weight {weight} is not a sum of distinct parts in 1..={n}")]
    InfeasibleWeight { n: usize, weight: usize },

    #[error("schedule exhausted")]
    Exhausted,

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = GrandError> = std::result::Result<T, E>;

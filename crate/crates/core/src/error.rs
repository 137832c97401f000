use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid spin value {value} at position {index} (must be +1 or -1)")]
    InvalidSpin { index: usize, value: i64 },

    #[error("size {n} out of range: {reason}")]
    Size { n: usize, reason: String },

    #[error("non-finite coefficient at ({i}, {j})")]
    NonFinite { i: usize, j: usize },

    #[error("index {index} out of range for n = {n}")]
    Index { index: usize, n: usize },

    #[error("invalid clause {clause}: {reason}")]
    Clause { clause: usize, reason: String },

    #[error("instance generation failed after {attempts} attempts")]
    GenerationFailed { attempts: u64 },

    #[error("enumeration of n = {n} exceeds the guard n <= {limit} (about {predicted_ops} operations); override to proceed")]
    ResourceGuard {
        n: usize,
        limit: usize,
        predicted_ops: u128,
    },

    #[error("enumeration cancelled after {visited} visits")]
    Cancelled { visited: u64 },

    #[error("cannot merge spectra: {0}")]
    Merge(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("fit error: {reason}; usable points: {usable:?}")]
    Fit {
        reason: String,
        usable: Vec<(f64, f64)>,
    },

    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

//! Crate-wide error and result types.

use thiserror::Error;

/// Errors produced by dataset loading, training, and the experiment
/// harness.
#[derive(Debug, Error)]
pub enum Error {
    /// A file could not be read or written.
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    /// A data file violated its expected format.
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    /// A dataset recipe was malformed or inconsistent.
    #[error("recipe {origin}: {msg}")]
    Recipe { origin: String, msg: String },

    /// A dataset name did not match any known recipe.
    #[error("unknown dataset `{0}`")]
    UnknownDataset(String),

    /// A configuration value was out of its legal range.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Two containers that must agree in length did not.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// An operation that requires at least one element received none.
    #[error("empty {0}")]
    Empty(&'static str),

    /// A value that must be finite was NaN or infinite.
    #[error("non-finite value in {0}")]
    NonFinite(String),

    /// JSON serialization or deserialization failed.
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Wraps an I/O error with the path it occurred on.
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

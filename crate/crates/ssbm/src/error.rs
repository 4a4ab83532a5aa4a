//! Crate-wide error type.

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A data line in an edge-list or partition file could not be parsed.
    #[error("{path}:{line}: {reason}")]
    MalformedLine {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    /// The same node pair appears with both a positive and a negative sign.
    #[error("conflicting signs for edge between '{a}' and '{b}'")]
    ConflictingSign { a: String, b: String },

    /// An edge-list file contains no data lines and no node directive.
    #[error("edge list {path} contains no edges")]
    EmptyInput { path: PathBuf },

    #[error("invalid value for '{field}': {reason}")]
    InvalidConfig { field: String, reason: String },

    /// A generator could not place the required number of edges within its
    /// attempt budget.
    #[error("could not place {required} distinct edges (placed {placed}) within the attempt budget")]
    InfeasibleConfig { required: usize, placed: usize },

    /// Every block was annihilated before any model could be recorded.
    #[error("all blocks were annihilated; no model survived")]
    DegenerateModel,

    #[error("partition length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("node sets differ between result and ground truth: {detail}")]
    NodeSetMismatch { detail: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("malformed result file {path}: {reason}")]
    MalformedResult { path: PathBuf, reason: String },
}

impl Error {
    /// Wraps an I/O error with the path it happened on.
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn config(field: &str, reason: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field: field.to_string(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

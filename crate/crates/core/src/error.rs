use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by the generator, the analysis routines and the file formats.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Domain(String),

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("cannot sample from a distribution with zero total weight")]
    EmptyDistribution,

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("unreliable fit: {0}")]
    UnreliableFit(String),

    #[error("invariant check failed: {0}")]
    InvariantViolation(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

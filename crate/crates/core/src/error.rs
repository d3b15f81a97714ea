use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the modeling, simulation, compilation and task pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// A problem builder was given an input that has no QUBO encoding.
    #[error("model error: {0}")]
    Model(String),

    /// Parameters are well-formed but cannot produce a meaningful result.
    #[error("configuration error: {0}")]
    Config(String),

    /// Something is larger than the simulator or the chip can hold.
    #[error("capacity error: {0}")]
    Capacity(String),

    /// Malformed input document. `location` is a line/column or a field path.
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("task {0} not found")]
    NotFound(String),

    /// The task exists but has no result to hand out.
    #[error("result unavailable: task is {status}{}", .detail.as_deref().map(|d| format!(" ({d})")).unwrap_or_default())]
    Unavailable {
        status: String,
        detail: Option<String>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

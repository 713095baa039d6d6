use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = MetaqaError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum MetaqaError {
    #[error("cannot read or write {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Too many malformed rows, or a structurally unusable corpus file.
    #[error("corpus error: {0}")]
    Corpus(String),

    #[error("profiling error: {0}")]
    Profiling(String),

    #[error("training error: {0}")]
    Training(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An artifact header named a different format than the reader expects.
    #[error("format version mismatch: expected `{expected}`, found `{found}`")]
    FormatVersion { expected: String, found: String },

    #[error("cannot parse {what}: {message}")]
    Parse { what: String, message: String },

    /// Internal invariant broken; maps to exit code 2 in the CLI.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl MetaqaError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        MetaqaError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(what: impl Into<String>, message: impl ToString) -> Self {
        MetaqaError::Parse {
            what: what.into(),
            message: message.to_string(),
        }
    }
}

use std::path::PathBuf;

use thiserror::Error;

/// Errors raised while loading, validating or analysing a corpus.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A line in an input file could not be parsed.
    #[error("{}:{line}: {message}", path.display())]
    Format {
        path: PathBuf,
        line: usize,
        message: String,
    },

    /// Parsed fine, but refers to something inconsistent (unknown code, duplicate id, ...).
    #[error("{location}: {message}")]
    Validation { location: String, message: String },

    /// A caller broke an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("unknown sign code {0}")]
    UnknownCode(u32),

    #[error("transition probability from {from} to {to} is undefined")]
    UndefinedProbability { from: String, to: String },

    #[error("not a quantity: {0}")]
    NotAQuantity(String),

    #[error("ambiguous quantity: {0}")]
    AmbiguousQuantity(String),

    #[error("cannot generate: {0}")]
    CannotGenerate(String),
}

impl Error {
    pub(crate) fn format(path: &std::path::Path, line: usize, message: impl Into<String>) -> Self {
        Error::Format {
            path: path.to_path_buf(),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn validation(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            location: location.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A model parameter is outside the domain where the model is defined.
    #[error("invalid parameter `{name}`: {reason}")]
    Validation { name: &'static str, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Every centroid sits at zero distance and a negative exponent gives them all zero weight.
    #[error("label assignment failed: {0}")]
    Assignment(String),

    #[error("metric undefined: {0}")]
    UndefinedMetric(String),

    #[error("split failed: {0}")]
    Split(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {reason}")]
    Parse {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Process exit status: 2 for rejected input, 3 for file problems, 4 for internal faults.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation { .. }
            | Error::InvalidArgument(_)
            | Error::Assignment(_)
            | Error::UndefinedMetric(_)
            | Error::Split(_) => 2,
            Error::Io { .. } | Error::Parse { .. } => 3,
            Error::Invariant(_) => 4,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, reason: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            reason: reason.into(),
        }
    }
}

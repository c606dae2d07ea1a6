use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid individual: {0}")]
    InvalidIndividual(String),

    #[error("incompatible parents: {0}")]
    IncompatibleParents(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("delta undefined: evolved mean is zero")]
    UndefinedDelta,

    #[error("fitness evaluation failed for program:\n{program}\ncaused by: {source}")]
    Fitness {
        program: String,
        #[source]
        source: Box<Error>,
    },

    #[error("{context}: {source}")]
    Tagged {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::InvalidConfiguration(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn tagged(self, context: impl Into<String>) -> Self {
        Error::Tagged {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// True for failures caused by unreadable or malformed user input
    /// (files, flags, config) as opposed to domain-level errors.
    pub fn is_usage(&self) -> bool {
        match self {
            Error::Io { .. } | Error::Parse { .. } => true,
            Error::Tagged { source, .. } => source.is_usage(),
            _ => false,
        }
    }
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A value violates a domain invariant. `path` names the offending
    /// field, e.g. `preventive_tasks[3].due`.
    #[error("{path}: {message}")]
    Validation { path: String, message: String },

    /// Input text could not be read at all.
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// Mathematically undefined input, e.g. a zero period.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unit mismatch: cannot compare {value} against {objective}")]
    UnitMismatch {
        value: &'static str,
        objective: &'static str,
    },

    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
}

impl Error {
    pub fn validation(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Stable machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Validation { .. } => "validation",
            Error::Parse { .. } => "parse",
            Error::Domain(_) => "domain",
            Error::UnitMismatch { .. } => "unit_mismatch",
            Error::UnknownFixture(_) => "unknown_fixture",
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

use thiserror::Error;

/// Errors raised by the lattice, space, logic and proof layers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("algebra mismatch: element belongs to a different algebra")]
    AlgebraMismatch,

    #[error("{what} too large: size {size} exceeds cap {cap}")]
    TooLarge { what: String, size: u128, cap: u128 },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown atom `{0}`")]
    UnknownAtom(String),

    #[error("unknown sort `{0}`")]
    UnknownSort(String),

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("rule violation at {path}: {reason}")]
    RuleViolation { path: String, reason: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn too_large(what: impl Into<String>, size: u128, cap: u128) -> Self {
        Error::TooLarge {
            what: what.into(),
            size,
            cap,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Validation(format!("json: {e}"))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

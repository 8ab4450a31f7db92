use thiserror::Error;

use crate::exactnum::FieldDesc;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field descriptor d = {0}: must be squarefree and not 0 or 1")]
    InvalidField(i64),

    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: FieldDesc, right: FieldDesc },

    #[error("division by zero")]
    DivisionByZero,

    #[error("cannot parse entry {text:?}: {reason}")]
    Entry { text: String, reason: String },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("singular matrix (rank {rank} of {size})")]
    Singular { rank: usize, size: usize },

    #[error("invalid scheme: {0}")]
    InvalidScheme(String),

    #[error("scheme fails the Brent equations at {0}")]
    BrentViolation(String),

    #[error("{0}")]
    Format(String),

    #[error("operation requires a scheme with rational entries")]
    NotRational,

    #[error("internal contradiction: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("JSON error at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

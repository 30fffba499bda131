use thiserror::Error;

/// Errors raised by the geometry pipeline.
///
/// `Integrity` is reserved for outcomes that would contradict a proven
/// structural fact (for example a non-transitive trace relation); every other
/// variant is an input or precondition problem.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field parameters: {0}")]
    Field(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("integrity failure: {0}")]
    Integrity(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

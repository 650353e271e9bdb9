use thiserror::Error;

/// Errors raised by constructions and checkers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid embedding: {0}")]
    Embedding(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("size cap exceeded: {0}")]
    CapExceeded(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invariant(_) => 2,
            Error::Construction(_) | Error::CapExceeded(_) => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

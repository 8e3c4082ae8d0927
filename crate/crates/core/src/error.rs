use thiserror::Error;

/// Errors raised by the library.
///
/// Each variant maps onto one process exit code in the command-line front end
/// (see [`Error::exit_code`]).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invariant violation: {0}")]
    Invariant(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("polytope is unbounded")]
    Unbounded,
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::ResourceLimit(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    /// Exit code used by the `srr` binary.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) | Error::UnsupportedDimension(_) => 2,
            Error::ResourceLimit(_) => 3,
            Error::DivisionByZero
            | Error::Precondition(_)
            | Error::Invariant(_)
            | Error::Parse { .. }
            | Error::Unbounded => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

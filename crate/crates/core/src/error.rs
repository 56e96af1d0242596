use std::fmt;

/// Errors shared by every module in the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A precondition on an argument was violated.
    InvalidArgument(String),
    /// An intermediate value left the supported integer or sieve range.
    RangeError(String),
    /// An exhaustive enumeration would exceed the configured size budget.
    SizeError(String),
    /// A search completed without finding a required object.
    NotFound(String),
    /// The requested parameter is outside the implemented set.
    Unsupported(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::RangeError(msg) => write!(f, "range error: {msg}"),
            Error::SizeError(msg) => write!(f, "size error: {msg}"),
            Error::NotFound(msg) => write!(f, "not found: {msg}"),
            Error::Unsupported(msg) => write!(f, "unsupported: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;

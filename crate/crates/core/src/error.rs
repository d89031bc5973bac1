use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A ring, module or poset description that cannot be built.
    InvalidSpec(String),
    /// A well-formed value that violates an operation's precondition.
    InvalidArgument(String),
    /// An enumeration guard was exceeded.
    Resource {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    /// Two independent computations disagreed.
    Internal(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidSpec(m) => write!(f, "invalid spec: {m}"),
            Error::InvalidArgument(m) => write!(f, "invalid argument: {m}"),
            Error::Resource { what, size, limit } => {
                write!(f, "resource limit exceeded: {what} is {size}, limit is {limit}")
            }
            Error::Internal(m) => write!(f, "internal consistency failure: {m}"),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn invalid_spec(msg: impl Into<String>) -> Error {
    Error::InvalidSpec(msg.into())
}

pub(crate) fn invalid_arg(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

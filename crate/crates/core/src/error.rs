use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// A precondition on the arguments does not hold.
    InvalidArgument(String),
    /// The request exceeds a configured cap.
    ResourceLimit {
        what: &'static str,
        requested: u64,
        cap: u64,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::ResourceLimit { what, requested, cap } => {
                write!(f, "resource limit: {what} {requested} exceeds cap {cap}")
            }
        }
    }
}

impl core::error::Error for Error {}

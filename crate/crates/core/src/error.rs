use std::io;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An index, position or count outside the valid range.
    #[error("range error: {0}")]
    Range(String),
    /// A precondition of an operation does not hold.
    #[error("contract violation: {0}")]
    Contract(String),
    /// Input that does not describe a well-formed structure.
    #[error("malformed structure: {0}")]
    Structure(String),
    /// The structure was built without the requested capability.
    #[error("capability not available: {0}")]
    Capability(String),
    /// Bad or version-mismatched container file.
    #[error("format error: {0}")]
    Format(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn range(msg: impl Into<String>) -> Self {
        Error::Range(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn structure(msg: impl Into<String>) -> Self {
        Error::Structure(msg.into())
    }

    pub(crate) fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }
}

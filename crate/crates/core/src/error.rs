use thiserror::Error;

/// Errors raised by sftkit operations.
///
/// Variants are grouped by how a caller should react: `Domain` means the
/// input itself is malformed, `Precondition` means the input is well formed
/// but outside the hypotheses of the operation, and `Resource` means a
/// configured search or size budget was exhausted.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("move not applicable: {0}")]
    MoveInapplicable(String),
    #[error("construction error: {0}")]
    Construction(String),
    #[error("resource budget exceeded: {0}")]
    Resource(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Resource(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid cut: member set must be a nonempty proper subset of the {0} nodes")]
    InvalidCut(usize),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("graph is not connected")]
    Disconnected,

    #[error("graph needs at least two nodes")]
    TooSmall,

    #[error("state error: {0}")]
    State(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}

use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("series of length {len} is shorter than the query length {n}")]
    SeriesTooShort { len: usize, n: usize },

    #[error(
        "working set of {required} bytes exceeds the memory budget of {budget} bytes; \
         raise the fragment count to shrink each fragment"
    )]
    MemoryBudget { required: u64, budget: u64 },

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("transport error: {0}")]
    Transport(String),

    #[error("reduction round {round} timed out")]
    Timeout { round: u32 },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for failures of the coordination layer rather than of the input.
    pub fn is_transport(&self) -> bool {
        matches!(self, Error::Transport(_) | Error::Timeout { .. })
    }
}

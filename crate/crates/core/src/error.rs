use serde::Serialize;

/// Per-attempt statistics of the randomized weak-set construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AttemptStats {
    pub attempt: u32,
    pub seed: u64,
    pub sampled: usize,
    pub bad: usize,
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed values: dimension mismatch, element out of range, empty input.
    #[error("structural error: {0}")]
    Structural(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A configured enumeration cap would be exceeded. Never a wrong verdict.
    #[error("resource cap exceeded: {what} needs {needed}, cap is {cap}")]
    Resource {
        what: &'static str,
        needed: u128,
        cap: u128,
    },

    #[error("all {} attempts failed", .attempts.len())]
    Exhausted { attempts: Vec<AttemptStats> },

    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn structural(msg: impl Into<String>) -> Error {
    Error::Structural(msg.into())
}

pub(crate) fn parameter(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}

use thiserror::Error;

/// Errors surfaced by the library. Resource caps are always reported,
/// never turned into a wrong answer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("frame mismatch: expected {expected} variables, got {got}")]
    FrameMismatch { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("check failed: {0}")]
    CheckFailed(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn cap(msg: impl Into<String>) -> Self {
        Error::ResourceCap(msg.into())
    }

    /// Process exit code for the CLI contract: 1 = mathematical check
    /// failure, 2 = usage/input error, 3 = resource cap.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CheckFailed(_) => 1,
            Error::ResourceCap(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised by the algebra, module and frame layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum FrameError {
    /// Shapes, ranks or algebra specs do not fit together.
    #[error("structural error: {0}")]
    Structural(String),

    /// The inputs are well formed but outside the operation's domain
    /// (not positive, not a frame, not surjective, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Seeded instance generation ran out of retries.
    #[error("generation error: {0}")]
    Generation(String),

    /// Two independent numerical routes disagree beyond tolerance.
    #[error("numerical consistency error: {0}")]
    Consistency(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl FrameError {
    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        FrameError::Structural(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        FrameError::Domain(msg.into())
    }
}

impl From<serde_json::Error> for FrameError {
    fn from(err: serde_json::Error) -> Self {
        FrameError::Parse {
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, FrameError>;

use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("could not find a {kind} assignment within {trials} random probes")]
    UnsatisfiablePlant { kind: &'static str, trials: u64 },

    #[error("iteration count undefined when no index is marked")]
    UndefinedIterations,

    #[error("malformed database at byte offset {offset}: {reason}")]
    Format { offset: usize, reason: String },

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

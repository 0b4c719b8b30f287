use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid family {family}: {reason}")]
    InvalidFamily { family: String, reason: String },
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("empty vertex set")]
    EmptyVertexSet,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is not simple")]
    NotSimple,
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not square")]
    NotSquare,
    #[error("diagonal entries must be positive")]
    NonPositiveDiagonal,
    #[error("linear form has non-positive leading coefficient: alpha={alpha}, beta={beta}")]
    NonPositiveAlpha { alpha: String, beta: String },
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("not found: {0}")]
    NotFound(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn contract(msg: impl Into<String>) -> Error {
    Error::Contract(msg.into())
}

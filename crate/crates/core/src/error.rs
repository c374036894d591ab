use thiserror::Error;

/// Errors produced by the simulator and the analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown subsystem slot `{0}`")]
    UnknownSlot(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("matrix is not positive semidefinite (minimum eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("protocol exhausted: no receivers remain in the channel")]
    ProtocolExhausted,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

use thiserror::Error;

/// Errors raised by the exact geometry, enumeration and certification layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KnxError {
    #[error("polynomial in epsilon would exceed degree 2")]
    DegreeOverflow,

    #[error("{what}: {count} exceeds the configured cap of {cap}")]
    CapExceeded {
        what: &'static str,
        count: usize,
        cap: usize,
    },

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("zero vector has no primitive rescaling")]
    ZeroVector,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("vertices must share a common epsilon-linear part")]
    MixedPerturbation,

    #[error("invalid group data: {0}")]
    InvalidGroup(String),

    #[error("invalid character: {0}")]
    InvalidCharacter(String),

    #[error("point classification is only available for tori")]
    NonabelianUnsupported,

    #[error("unsupported mode: {0}")]
    UnsupportedMode(String),

    #[error("slice subtraction failed: {0}")]
    SliceSubtractionFailure(String),

    #[error("dropped stratum {0} does not match any enumerated stratum")]
    UnknownDroppedStratum(String),

    #[error("missing parameter: {0}")]
    MissingParameter(String),

    #[error("schema error: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, KnxError>;

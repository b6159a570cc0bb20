use thiserror::Error;

/// Errors returned by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid constellation parameters: {0}")]
    InvalidConstellation(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("bit index {index} out of range for {n_bits}-bit constellation")]
    BitIndex { index: usize, n_bits: usize },
    #[error("invalid bit value {0}, expected 0 or 1")]
    BitValue(u8),
    #[error("layered prior aggregation requires a superposition constellation")]
    NoLayerSpec,
    #[error("empty input")]
    Empty,
    #[error("invalid code: {0}")]
    InvalidCode(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

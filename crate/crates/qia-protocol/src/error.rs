use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("frame error: {0}")]
    Frame(String),

    #[error("length mismatch: expected {expected_bits} bits, got {got}")]
    LengthMismatch { expected_bits: usize, got: String },

    #[error("phase violation: expected {expected}, got {got}")]
    PhaseViolation { expected: String, got: String },

    #[error("session aborted: {0}")]
    Aborted(String),

    #[error("core: {0}")]
    Core(#[from] qia_core::Error),

    #[error("config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, ProtocolError>;

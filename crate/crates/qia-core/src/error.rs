use thiserror::Error;

/// Errors surfaced by the core library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected} bits, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("distribution is not normalized (total mass {mass})")]
    Unnormalized { mass: f64 },

    #[error("alphabet too large for exact search: {cells} cells (limit {limit})")]
    AlphabetTooLarge { cells: usize, limit: usize },

    #[error("exhaustive enumeration refused for n={n}: strategy space is (2^n)^(2^n) per side")]
    TooManyCopies { n: u32 },

    #[error("smoothing precondition failed: measured I_s^beta = {measured:.6} exceeds cap {cap:.6}")]
    SpectrumInfoExceedsCap { measured: f64, cap: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

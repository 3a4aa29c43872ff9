//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("field shape mismatch: expected {expected} values, got {got}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("non-finite sample at index {index}")]
    NonFiniteSample { index: usize },

    #[error("invalid cutoff radius {0}; must be positive")]
    InvalidCutoff(f64),

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("potential evaluation produced a non-finite value at sample index {index}")]
    NonFinitePotential { index: usize },

    #[error("invalid solver configuration: {0}")]
    InvalidSolverConfig(String),

    #[error("negative propagation time {0}")]
    NegativeTime(f64),

    #[error("blow-up detected at t = {t} (step {step}): {detail}")]
    BlowUp { t: f64, step: u64, detail: String },

    #[error("gradient is numerically zero; ratio undefined")]
    ZeroGradient,

    #[error("zero denominator in inequality ratio")]
    ZeroDenominator,

    #[error("configuration errors:\n{}", .0.join("\n"))]
    Config(Vec<String>),

    #[error("snapshot format error: {0}")]
    SnapshotFormat(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

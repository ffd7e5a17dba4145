//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },

    #[error("matrix entries must be finite")]
    NonFinite,

    #[error("matrix is not symmetric within tolerance")]
    NotSymmetric,

    #[error("matrix is not positive definite (pivot {pivot} at or below pivot tolerance)")]
    NotPositiveDefinite { pivot: usize },

    #[error("delta {delta} outside (1/4, 1]")]
    InvalidDelta { delta: f64 },

    #[error("unimodular transform entry overflowed 64-bit integer range")]
    TransformOverflow,

    #[error("dimension {dim} exceeds exact-enumeration limit {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("enumeration node budget {budget} exhausted")]
    RadiusOverflow { budget: u64 },

    #[error("index {index} out of range 1..={dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("negative value where a nonnegative one is required")]
    NegativeInput,

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("matrix is rank deficient")]
    RankDeficient,

    #[error("capacity constraint infeasible: threshold {threshold} admits no search interval")]
    CapacityTooSmall { threshold: f64 },

    #[error("instance generation failed after {attempts} attempts")]
    GenerationFailed { attempts: usize },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

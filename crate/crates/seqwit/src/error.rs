use thiserror::Error;

/// Errors surfaced by the simulation layers.
#[derive(Debug, Error)]
pub enum SeqwitError {
    #[error("matrix dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid subsystem selection")]
    InvalidSubsystem,

    #[error("matrix is not Hermitian within tolerance")]
    NotHermitian,

    #[error("sharpness parameter must lie in (0, 1], got {0}")]
    SharpnessOutOfRange(f64),

    #[error("stage index {index} out of range (chain has {stages} stages)")]
    StageOutOfRange { index: usize, stages: usize },

    #[error("branch enumeration too large: {branches} branches exceeds cap {cap}")]
    EnumerationTooLarge { branches: u64, cap: u64 },

    #[error("witness expectation cannot become negative at stage {stage} (slope {beta:.6} <= 0)")]
    NonNegativeSlope { stage: usize, beta: f64 },
}

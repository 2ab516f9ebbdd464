use thiserror::Error;

/// Errors raised by window construction and verification routines.
///
/// Every variant is a domain-constraint rejection: the inputs were
/// syntactically valid but violate a mathematical precondition.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("period must be a positive integer")]
    InvalidPeriod,

    #[error("target period {target} is not a positive integer multiple of period {period}")]
    PeriodNotMultiple { period: u64, target: u64 },

    #[error(
        "polynomial with period {period} is not pointwise {n}-periodic \
         (index {index} has a fractional frequency after rebasing)"
    )]
    NotPeriodic { period: u64, n: u64, index: i64 },

    #[error("polynomial is not real-valued on the reals (conjugate-symmetry defect {max_asymmetry:.3e})")]
    NotRealOnReals { max_asymmetry: f64 },

    #[error(
        "window polynomial period {period} is neither pointwise {n}-periodic \
         nor {two_n}-periodic for support length {n}"
    )]
    WindowPeriodMismatch { period: u64, n: u64, two_n: u64 },

    #[error("operation requires a single-piece window, got {pieces} pieces")]
    MultiPieceWindow { pieces: usize },

    #[error(
        "factorization step {step}: division remainder {remainder:.3e} exceeds \
         tolerance {tolerance:.3e}; the endpoint vanishing order is too low"
    )]
    FactorizationRemainder { step: u32, remainder: f64, tolerance: f64 },

    #[error(
        "partition-of-unity precondition violated: sampled residual {residual:.3e} \
         exceeds {tolerance:.3e}"
    )]
    PartitionOfUnityViolated { residual: f64, tolerance: f64 },

    #[error("dual coefficient constraint violated: {detail}")]
    DualCoefficients { detail: String },

    #[error("modulation step b = {b} out of range; required: {required}")]
    ModulationStep { b: f64, required: String },

    #[error("{context}: L = {l} but L <= {max} is required")]
    PowerOutOfRange { l: u32, max: u32, context: &'static str },

    #[error("amplitude must be positive, got {amplitude}")]
    NonpositiveAmplitude { amplitude: f64 },

    #[error("support length N = {n} too short; N >= {min} required")]
    SupportTooShort { n: u64, min: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;

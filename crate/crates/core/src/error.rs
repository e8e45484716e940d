use thiserror::Error;

/// Errors raised by constructors and operations across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} must be finite, got {value}")]
    NotFinite { what: &'static str, value: f64 },

    #[error("amplitudes must be normalized: |a+|^2 + |a-|^2 = {norm} is off by more than {tolerance}")]
    NotNormalized { norm: f64, tolerance: f64 },

    #[error("weights and rewards must have the same arity: {weights} weights vs {rewards} rewards")]
    ArityMismatch { weights: usize, rewards: usize },

    #[error("operation requires exactly {expected} outcomes, got {got}")]
    UnsupportedArity { expected: usize, got: usize },

    #[error("outcome count must be at least 1")]
    EmptyOutcomes,

    #[error("ratio must lie in [0, 1], got {ratio}")]
    RatioOutOfRange { ratio: String },

    #[error("refinement multiplicities must be at least 1, got ({k_plus}, {k_minus})")]
    InvalidMultiplicity { k_plus: u32, k_minus: u32 },

    #[error("axiom conflict: {0}")]
    AxiomConflict(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
}

pub type Result<T> = std::result::Result<T, Error>;

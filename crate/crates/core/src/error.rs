use thiserror::Error;

/// Errors raised by the sampler library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix is not symmetric positive definite")]
    NotPositiveDefinite,

    #[error("leapfrog trajectory diverged at step {step}")]
    Divergence { step: usize },

    #[error("adaptive rejection sampling failed: {0}")]
    Ars(#[from] ArsError),

    #[error("all pilot chains diverged")]
    AllPilotsDiverged,

    #[error("series has zero variance")]
    ZeroVariance,

    #[error("chain was thinned (record_every = {0}); jump distances need every iteration")]
    ThinnedChain(usize),

    #[error("composite gradient vanishes at radius {0}")]
    VanishingCompositeGradient(f64),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("data error: {0}")]
    Data(String),
}

/// Failure modes of the adaptive rejection sampler.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ArsError {
    #[error("log-density is not concave near {at} (exceeds upper hull by {excess:e})")]
    NotConcave { at: f64, excess: f64 },

    #[error("initial abscissae could not bracket the mode after {doublings} doublings")]
    NoBracket { doublings: usize },

    #[error("log-density or derivative is non-finite at {0}")]
    NonFinite(f64),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("space mismatch")]
    SpaceMismatch,
    #[error("not a continuity set: {0}")]
    NotContinuitySet(String),
    #[error("alpha must lie in (0,1)")]
    AlphaOutOfRange,
    #[error("alpha mismatch: {0} vs {1}")]
    AlphaMismatch(String, String),
    #[error("sample size must be at least 1")]
    EmptySample,
    #[error("invalid world: {0}")]
    InvalidWorld(String),
    #[error("invalid event: {0}")]
    InvalidEvent(String),
    #[error("invalid hypothesis: {0}")]
    InvalidHypothesis(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("non-surjective pairing: {0}")]
    NonSurjectivePairing(String),
    #[error("claim/ground-truth mismatch: {0}")]
    ClaimMismatch(String),
    #[error("invalid trial plan: {0}")]
    InvalidPlan(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

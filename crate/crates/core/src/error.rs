use thiserror::Error;

use crate::verify::CertificateReport;

/// Errors raised by constructors, validators and the search engine.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("instance too small: {0}")]
    InstanceTooSmall(String),
    #[error("bad connection set: {0}")]
    BadConnectionSet(String),
    #[error("bad cycle type: {0}")]
    BadCycleType(String),
    #[error("bad modulus: {0}")]
    BadModulus(String),
    #[error("bad starter: {0}")]
    BadStarter(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("search failed: {0}")]
    SearchFailed(String),
    #[error("difference set not of walk form: {0}")]
    BadForm(String),
    #[error("vertex collision: {0}")]
    CollisionDetected(String),
    #[error("odd cycle length in bipartite doubling: {0}")]
    OddLengthInBipartite(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("condition {condition} failed: {detail}")]
    ConditionFailed { condition: String, detail: String },
    #[error("construction did not certify: {0}")]
    NotCertified(CertificateReport),
    #[error("replay diverged: {0}")]
    ReplayDiverged(String),
    #[error("cache: {0}")]
    Cache(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

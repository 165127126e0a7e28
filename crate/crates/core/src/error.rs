use thiserror::Error;

use crate::twisted_curve::ChainViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid component: {0}")]
    InvalidComponent(String),
    #[error("component mismatch: {0}")]
    ComponentMismatch(String),
    #[error("invalid chain: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidChain(Vec<ChainViolation>),
    #[error("invalid bundle: {0}")]
    InvalidBundle(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("log-canonical certificate failed: {0}")]
    CertificateFailure(String),
    #[error("power {power} exceeds sector dimension {dim}")]
    PowerExceedsDimension { power: usize, dim: usize },
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("invalid sector weight {0}: weights must lie in [0,1)")]
    InvalidWeight(String),
    #[error("exponent {0} is not an integer; inputs are not realizable by a split bundle")]
    NonIntegerExponent(String),
    #[error("degenerate pairing: {0}")]
    DegeneratePairing(String),
    #[error("inconsistent invariant table: {0}")]
    InconsistentTable(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
}

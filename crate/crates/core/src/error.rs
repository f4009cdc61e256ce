use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Error)]
pub enum Error {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("element is not invertible")]
    NotInvertible,
    #[error("unsupported modulus {0}")]
    UnsupportedModulus(String),
    #[error("bad modulus {0}")]
    BadModulus(String),
    #[error("polynomial of degree {0} is not quadratic")]
    NotQuadratic(u32),
    #[error("variable {0} has no bound")]
    UnboundedVariable(String),
    #[error("constraint bound {0} leaves an empty or single-point window; use an exact equation")]
    EmptyOrPointConstraint(String),
    #[error("assignment is missing bits: {0}")]
    MissingBits(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("external solver returned an assignment that does not satisfy the system")]
    ExternalSolverMismatch,
    #[error("basis is rank deficient")]
    RankDeficient,
    #[error("centered representation needs an odd prime, got {0}")]
    CenteredRepUnsupported(String),
    #[error("key generation failed after {0} attempts")]
    KeygenFailed(usize),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("witness does not satisfy the system: {0}")]
    NotAWitness(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

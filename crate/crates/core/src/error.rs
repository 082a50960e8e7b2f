use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("degenerate code rate: every output bit is punctured")]
    DegenerateRate,
    #[error("minimum weight undefined for an empty enumerator")]
    EmptyEnumerator,
    #[error("integer overflow while accumulating {0}")]
    Overflow(&'static str),
    #[error("resource limit exceeded: {0}")]
    Limit(String),
}

pub type Result<T> = std::result::Result<T, Error>;

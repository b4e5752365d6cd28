use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid modulus {0}: must be at least 2")]
    InvalidModulus(u64),
    #[error("vector has no unit coordinate modulo {0}")]
    NotProjective(u64),
    #[error("{0} is not a prime dividing the modulus")]
    InvalidPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("structural mismatch: {0}")]
    Structure(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not p-integral (denominator divisible by {0})")]
    NotInDomain(u64),
    #[error("reduced modulus does not match (z-1)^{0}")]
    TargetMismatch(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("singular system")]
    Singular,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("contract violation: {0}")]
    ContractViolation(String),
    #[error("prime {0} is not covered by the order tuple")]
    MissingPrime(u64),
    #[error("rho is not a polynomial: cyclotomic factor Phi_{0} has negative multiplicity")]
    NotIntegral(u64),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

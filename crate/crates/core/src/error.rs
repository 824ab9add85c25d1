use thiserror::Error;

/// Errors raised by the algebra engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Exact polynomial division was requested but the divisor does not divide.
    #[error("polynomial is not divisible by the given divisor")]
    NotDivisible,

    /// Operands live over different primes or in different numbers of variables.
    #[error("incompatible operands: {0}")]
    Mismatch(String),

    /// A linear operator could not be written as a nilHecke element.
    #[error("operator is not realized by a nilHecke element: {0}")]
    Reconstruction(String),

    /// A differential failed a structural requirement such as d^p = 0.
    #[error("structure error: {0}")]
    Structure(String),
}

pub type Result<T> = std::result::Result<T, Error>;

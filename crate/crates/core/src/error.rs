use thiserror::Error;

/// Errors raised by the library. Every variant describes a rejected
/// argument or a computation that could not be completed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("argument must be positive, got 0")]
    Zero,

    #[error("indices must differ, got m = n = {0}")]
    EqualIndices(u64),

    #[error("arguments are not coprime: gcd({0}, {1}) != 1")]
    NotCoprime(String, String),

    #[error("polynomial division is not exact")]
    InexactDivision,

    #[error("polynomial is identically zero")]
    ZeroPolynomial,

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("root iteration did not converge after {sweeps} sweeps at {precision_bits} bits")]
    NonConvergence { sweeps: usize, precision_bits: u32 },

    #[error("could not certify result: {0}")]
    Uncertified(String),

    #[error("serialization error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid modulus {q}: {reason}")]
    InvalidModulus { q: u64, reason: &'static str },

    #[error("invalid lambda {lambda} mod {q}: {reason}")]
    InvalidLambda { lambda: u64, q: u64, reason: &'static str },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },

    #[error("{value} is not invertible mod {q}")]
    NonUnit { value: u64, q: u64 },

    #[error("{a}/{q} is not a reduced proper fraction")]
    InvalidFraction { a: u64, q: u64 },

    #[error("{what} too large: {size} exceeds cap {cap}")]
    TooLarge { what: &'static str, size: u128, cap: u128 },

    #[error("structure violation: {0}")]
    Structure(String),

    #[error("label mapping failed: {0}")]
    Mapping(String),

    #[error("non-finite value at index {0}")]
    NonFinite(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

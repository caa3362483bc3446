use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} must be at least {min}, got {value}")]
    TooSmall { what: &'static str, value: u64, min: u64 },

    #[error("{value} exceeds the configured bound {bound}")]
    BoundExceeded { value: u64, bound: u64 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("p-adic order of 0 is undefined")]
    ZeroOrder,

    #[error("empty list")]
    EmptyList,

    #[error("k = {k} is out of range for n = {n}")]
    IndexOutOfRange { n: u64, k: u64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("elements belong to different rings (n = {left} and n = {right})")]
    RingMismatch { left: u64, right: u64 },

    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

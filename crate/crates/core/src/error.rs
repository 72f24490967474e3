use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{value} exceeds the sieve limit {limit}; rebuild the prime tables with a larger limit")]
    Range { value: u64, limit: u64 },

    #[error("sieve limit {requested} exceeds the memory ceiling {ceiling}")]
    Resource { requested: u64, ceiling: u64 },

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("indeterminate: {0}; verify externally")]
    Indeterminate(String),

    #[error("invalid parameter: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

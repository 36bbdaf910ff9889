use thiserror::Error;

/// Everything fallible in this crate funnels into one error type. The split
/// that matters to callers is resource exhaustion (an enumeration would visit
/// more states than the configured cap) versus plain misuse.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cyclic factor orders must be nonzero")]
    ZeroFactor,

    #[error("element has {got} coordinates but the group has {expected} factors")]
    ArityMismatch { expected: usize, got: usize },

    #[error("operands belong to different groups: {0}")]
    GroupMismatch(String),

    #[error("image at position {index} violates the order constraint: {detail}")]
    OrderConstraint { index: usize, detail: String },

    #[error("enumeration needs {needed} states, over the cap of {limit} (raise the cap to proceed)")]
    EnumerationLimit { needed: u128, limit: u64 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{n} is not divisible by {d}")]
    Divisibility { d: u64, n: u64 },

    #[error("order census does not describe a finite abelian group: {0}")]
    InvalidCensus(String),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// True for errors that a bigger enumeration cap would cure.
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::EnumerationLimit { .. })
    }
}

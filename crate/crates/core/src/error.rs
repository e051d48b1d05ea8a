use thiserror::Error;

/// Errors raised by the exact-arithmetic routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("infinite valuation: the valuation of 0 is not a natural number")]
    InfiniteValuation,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("enumeration limit exceeded: {what} = {size} > {limit}")]
    LimitExceeded {
        what: &'static str,
        size: u128,
        limit: u128,
    },
    #[error("index ({0}, {1}) is not in the admissible index set")]
    IndexNotAdmissible(usize, usize),
    #[error("matrix is not symplectic")]
    NotSymplectic,
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("hypothesis of the statement not satisfied: {0}")]
    Inapplicable(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} is outside its domain ({expected})")]
    Domain { name: &'static str, value: f64, expected: &'static str },

    #[error("relay power is zero: the relay link carries no information, so no finite quantization noise balances it")]
    NoFiniteSolution,

    #[error("relay power is infinite; use the asymptotic operations for this budget")]
    InfiniteRelay,

    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    #[error("covariance matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("{got} samples supplied, at least {need} required")]
    InsufficientSamples { got: usize, need: usize },

    #[error("invalid Monte Carlo configuration: {0}")]
    InvalidConfig(&'static str),

    #[error("numerical check failed: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, expected: &'static str) -> Self {
        Error::Domain { name, value, expected }
    }
}

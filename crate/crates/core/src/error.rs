use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index {index} out of range for N = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("invalid spin: {0}")]
    InvalidSpin(String),
    #[error("dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("polynomial division is not exact")]
    NonDivisible,
    #[error("negative coefficient at exponent {0}")]
    NegativeCoefficient(String),
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("initial point outside the domain")]
    DomainViolation,
    #[error("table total {got} differs from the spin-space dimension {expected}")]
    IncompleteTable { expected: String, got: String },
    #[error("spectrum has zero variance")]
    NoVariance,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NoConvergence { .. } | Error::DimensionCap { .. } | Error::DomainViolation => 3,
            Error::NonDivisible
            | Error::NegativeCoefficient(_)
            | Error::IncompleteTable { .. }
            | Error::Invariant(_) => 4,
            Error::NoVariance => 3,
            _ => 2,
        }
    }
}

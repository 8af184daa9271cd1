use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0} is not an odd prime")]
    NotOddPrime(String),

    #[error("{0} is not prime")]
    NotPrime(String),

    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("truncation mismatch: {left} vs {right}")]
    TruncationMismatch { left: u32, right: u32 },

    #[error("substitution needs a series of order >= 1")]
    SubstitutionOrder,

    #[error("factoring bound exceeded: {requested} > {bound}")]
    FactorBoundExceeded { requested: u64, bound: u32 },

    #[error("tree budget exceeded: degree {degree} needs {needed} trees, budget is {budget}")]
    TreeBudgetExceeded { degree: u32, needed: String, budget: u64 },

    #[error("search limit {limit} exceeds cap {cap}")]
    SearchCapExceeded { limit: u64, cap: u64 },

    /// An internal identity that must always hold did not.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Process exit code used by the command-line front-end.
    ///
    /// 1 for invariant violations, 2 for bad input, 3 for resource bounds.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invariant(_) => 1,
            Error::FactorBoundExceeded { .. }
            | Error::TreeBudgetExceeded { .. }
            | Error::SearchCapExceeded { .. } => 3,
            _ => 2,
        }
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

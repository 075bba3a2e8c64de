use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    /// A value or parameter lies outside the set an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterate left the solver's domain; `index` is the 1-based sequence index.
    #[error("domain error at index {index}: {reason}")]
    DomainAt { index: usize, reason: String },

    /// The result cannot be distinguished from zero at the tracked precision.
    #[error("precision exhausted: {0}")]
    Precision(String),

    #[error("operands use different primes ({0} and {1})")]
    PrimeMismatch(u64, u64),

    #[error("shape mismatch: {0}")]
    Shape(String),

    /// Malformed construction input (bad arity, offsets, branching, ...).
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("no convergence within {0} iterations")]
    MaxIterations(usize),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn precision(msg: impl Into<String>) -> Self {
        Error::Precision(msg.into())
    }

    /// True for the errors that mean "the mathematics says no": domain
    /// violations, zero divisors and mismatched primes.
    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::DomainAt { .. } | Error::DivisionByZero | Error::PrimeMismatch(..))
    }
}

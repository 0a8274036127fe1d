use thiserror::Error;

/// Errors raised by the computational modules.
///
/// Every variant maps to a stable machine-readable code (see [`Error::code`])
/// which the CLI prints as `error: <CODE>: <message>`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid child set: {0}")]
    InvalidChildSet(String),

    #[error("constant term of the base polynomial must be 1")]
    NonUnitConstantTerm,

    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("no trees with child counts in {set} on {n} vertices")]
    NoTrees { set: String, n: u64 },

    #[error("variance of a statistic is zero; scaled moments are undefined")]
    DegenerateVariance,

    #[error("enumeration at n = {n} exceeds the cap n <= {cap}")]
    EnumerationTooLarge { n: u64, cap: u64 },

    #[error("invalid correlation: rho^2 = {0} exceeds 1")]
    InvalidCorrelation(String),

    #[error("insufficient data: need at least {needed} terms, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("leading coefficient of the recurrence vanishes at n = {0}")]
    LeadingCoefficientZero(i64),

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidChildSet(_) => "INVALID_CHILD_SET",
            Error::NonUnitConstantTerm => "NON_UNIT_CONSTANT_TERM",
            Error::InvalidQuery(_) => "INVALID_QUERY",
            Error::NoTrees { .. } => "NO_TREES",
            Error::DegenerateVariance => "DEGENERATE_VARIANCE",
            Error::EnumerationTooLarge { .. } => "ENUMERATION_TOO_LARGE",
            Error::InvalidCorrelation(_) => "INVALID_CORRELATION",
            Error::InsufficientData { .. } => "INSUFFICIENT_DATA",
            Error::LeadingCoefficientZero(_) => "LEADING_COEFFICIENT_ZERO",
            Error::Internal(_) => "INTERNAL",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

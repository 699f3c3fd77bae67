use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("operation not supported on generator specs: {0}")]
    UnsupportedSpec(String),

    #[error("word of length {len} exceeds the empirical measure horizon {max}")]
    WordTooLong { len: usize, max: usize },

    #[error("the subshift has no bi-infinite points")]
    EmptyLanguage,

    #[error("enumeration budget exhausted after {checks} checks")]
    BudgetExceeded { checks: u64 },

    #[error("joined partition would have more than {cap} atoms")]
    DepthCapExceeded { cap: usize },

    #[error("neighbourhood cylinders are not disjoint")]
    NonDisjointNeighbourhoods,

    #[error("premise violated: H(P^F)/n = {actual} exceeds n*delta^2 = {required}")]
    PremiseFailed { actual: f64, required: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("certificate failed revalidation: {0}")]
    CertificateInvalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised anywhere in the crate.
///
/// Variants split into two families: domain errors (bad input, unsupported
/// parameters) and internal invariant violations, which mean a computed
/// structure failed one of its own algebraic checks. See [`Error::is_internal`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    CompositeP(u64),
    #[error("extension degree must be at least 1")]
    DegreeZero,
    #[error("field of order {0} is too large (limit 65536)")]
    FieldTooLarge(u64),
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("gcd({n}, {q}) != 1")]
    NotCoprime { n: u64, q: u64 },
    #[error("n = {0} must be odd")]
    EvenN(u64),
    #[error("n = {0} must be greater than 1")]
    NTooSmall(u64),
    #[error("unsupported size: {0}")]
    UnsupportedDegree(String),
    #[error("value out of domain: {0}")]
    DomainError(String),
    #[error("scan bound {bound} reached after {found} of {wanted} items")]
    Exhausted {
        bound: u64,
        found: usize,
        wanted: usize,
    },
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("{0} blocks is more than the enumeration limit of 20")]
    TooManyBlocks(usize),
    #[error("code is not self-orthogonal")]
    NotSelfOrthogonal,
    #[error("quotient C^perp / C of dimension {0} is too large to enumerate")]
    QuotientTooLarge(usize),
    #[error("code has dimension 0")]
    ZeroDim,
    #[error("enumeration of {0} codewords exceeds the budget")]
    BudgetExceeded(u128),
    #[error("io error: {0}")]
    Io(String),

    #[error("bar pairing disagrees with the number-theoretic criterion: {0}")]
    CriterionMismatch(String),
    #[error("no quadratic field element found: {0}")]
    FieldNotFound(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("duality audit failed: {0}")]
    AuditFailure(String),
}

impl Error {
    /// True for errors that indicate a bug or a broken theorem rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::CriterionMismatch(_)
                | Error::FieldNotFound(_)
                | Error::DimensionMismatch(_)
                | Error::InvariantViolation(_)
                | Error::AuditFailure(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

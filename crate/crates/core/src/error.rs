use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("{0} is a square in Q, expected a nonsquare radicand")]
    SquareRadicand(String),

    #[error("mismatched quadratic extensions: sqrt({0}) vs sqrt({1})")]
    RadicandMismatch(String, String),

    #[error("{0} is not prime")]
    NotPrime(String),

    #[error("Hilbert symbol arguments must be nonzero")]
    ZeroArgument,

    #[error("factorization limit exceeded for {0}")]
    FactorizationLimit(String),

    #[error("search budget exceeded: {0}")]
    SearchBudgetExceeded(String),

    #[error("operation cancelled")]
    Cancelled,

    #[error("quadratic field is trivial (radicand is a square)")]
    TrivialField,

    #[error("denominator vanishes identically after substitution")]
    ZeroDenominator,

    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("invalid quadric: {0}")]
    InvalidQuadric(String),

    #[error("point is not on the quadric")]
    NotOnQuadric,

    #[error("every projection chart is degenerate for this center")]
    DegenerateCenter,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("internal verification failed: {0}")]
    VerificationFailed(String),

    #[error("parse error: {0}")]
    Parse(String),
}

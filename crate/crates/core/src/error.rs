use thiserror::Error;

/// Errors raised by the library. Degenerate inputs surface here or as
/// [`crate::counter::CountResult`] variants, never as silent miscounts.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("expected rank {expected}, found {found}")]
    Rank { expected: usize, found: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("interval does not isolate a root: {0}")]
    NotIsolating(String),
    #[error("degree {0} is too small")]
    DegreeTooSmall(usize),
    #[error("exponent matrix is singular")]
    SingularExponents,
    #[error("support lies in an affine hyperplane")]
    HyperplaneSupport,
    #[error("linear arguments {0} and {1} share a pole")]
    CoincidentPoles(usize, usize),
    #[error("interval does not isolate a critical point")]
    NotACriticalPoint,
    #[error("{0} is not a pole of the form")]
    NotAPole(String),
    #[error("precision budget exceeded at {bits} bits (ceiling {ceiling})")]
    BudgetExceeded { bits: u64, ceiling: u64 },
    #[error("genericity failure: {0}")]
    Genericity(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

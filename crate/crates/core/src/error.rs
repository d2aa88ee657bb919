use thiserror::Error;

use crate::young::Diagnostic;

/// Every failure mode surfaced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument {t} is outside the overflow-safe domain (cap {cap})")]
    DomainOverflow { t: f64, cap: f64 },

    #[error("functions or sets belong to different measure spaces")]
    SpaceMismatch,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{size} atoms exceed the enumeration limit of {limit}")]
    SizeExceeded { size: usize, limit: usize },

    #[error("no Rybakov functional found after {tries} candidates")]
    NotFound { tries: usize },

    #[error("the set has zero norm in the base space")]
    NullSet,

    #[error("the zero function admits no factorization")]
    ZeroFunction,

    #[error("method `{method}` is not applicable: {reason}")]
    MethodInapplicable { method: String, reason: String },

    #[error("no convergence after {iterations} iterations (best value {best})")]
    NonConvergence { iterations: usize, best: f64 },

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("invalid Young function: {}", join(.0))]
    InvalidYoung(Vec<Diagnostic>),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("no check matches filter `{0}`")]
    UnknownFilter(String),
}

fn join(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Every fallible operation in the crate reports one of these.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error("map is not injective: {0}")]
    NotInjective(String),
    #[error("value out of range: {0}")]
    RangeError(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("missing value for variable `{0}`")]
    MissingVariable(String),
    #[error("invalid derivation: {0}")]
    InvalidDerivation(String),
    #[error("input too large: {0}")]
    TooLarge(String),
    #[error("vocabulary mismatch: {0}")]
    VocabularyMismatch(String),
    #[error("constant `{0}` violates the restriction formula")]
    ConstantViolatesRestriction(String),
    #[error("vertex replacement needs positive arity, got 0 for `{0}`")]
    ZeroArity(String),
    #[error("arity {arity} exceeds the algebra cap {cap}")]
    ArityCap { arity: usize, cap: usize },
    #[error("partition is not a congruence: {0}")]
    NotACongruence(String),
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

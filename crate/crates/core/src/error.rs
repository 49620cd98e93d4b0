use thiserror::Error;

/// Errors raised by the engine. Every variant names the failing precondition.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("truncation caps or scalar kinds differ: {0}")]
    CapMismatch(String),
    #[error("element is not invertible: {0}")]
    NotInvertible(String),
    #[error("requested precision {requested} unreachable (certified {certified})")]
    UnreachablePrecision { requested: i64, certified: i64 },
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
    #[error("unsupported depth {0}")]
    UnsupportedDepth(usize),
    #[error("convention fault: {0}")]
    ConventionFault(String),
}

pub type Result<T> = std::result::Result<T, Error>;

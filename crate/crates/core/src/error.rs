use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoreError {
    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no sign change of J_{n} found below z = {limit} while looking for zero #{k}")]
    NoBracket { n: u32, k: u32, limit: f64 },

    #[error("case not covered by the closed-form expansions: {0}")]
    NotCovered(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;

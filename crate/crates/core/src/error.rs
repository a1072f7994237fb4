use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("undefined result: {0}")]
    Undefined(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no z-score for adjacent pair {from} -> {to}")]
    MissingPair { from: String, to: String },

    #[error("too few samples: {found} in range, need at least {needed}")]
    TooFewSamples { found: usize, needed: usize },

    #[error("likelihood has no finite optimum: {0}")]
    NoFiniteOptimum(String),

    #[error("grammar: {0}")]
    Grammar(String),
}

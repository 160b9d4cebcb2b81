use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("no convergence after {iterations} iterations")]
    Convergence { iterations: usize },

    #[error("division by zero: {0}")]
    DivideByZero(&'static str),

    #[error("index out of range: {0}")]
    Index(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("truncated input: needed {needed} bytes at offset {offset}, {available} available")]
    Truncation {
        offset: usize,
        needed: usize,
        available: usize,
    },

    #[error("rank {rank} exceeds min({rows}, {cols})")]
    Range {
        rank: usize,
        rows: usize,
        cols: usize,
    },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    /// True for errors caused by malformed input data rather than numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse(_)
                | Error::Format(_)
                | Error::Truncation { .. }
                | Error::Range { .. }
                | Error::Io(_)
        )
    }
}

pub(crate) fn shape_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Shape(msg.into()))
}

//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("field `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("layout does not match instance: {0}")]
    LayoutMismatch(String),

    #[error("bit assignment has length {got}, model expects {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("model has {got} variables, exceeding the {cap}-variable cap for this solver")]
    TooManyVariables { got: usize, cap: usize },

    #[error("instance too large for exhaustive search: {0}")]
    InstanceTooLarge(String),

    #[error("no assignment of products to robots satisfies the capacity limit")]
    InfeasibleInstance,

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }
}

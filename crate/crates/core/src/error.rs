use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("element is not homogeneous (degrees {degrees:?})")]
    NonHomogeneous { degrees: Vec<u32> },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    /// A computation was refused because it would exceed the configured budget.
    /// `estimate` describes the size the computation would have to handle.
    #[error("resource budget exceeded: {what} (estimate: {estimate}; limit: {limit})")]
    ResourceBudget {
        what: String,
        estimate: String,
        limit: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

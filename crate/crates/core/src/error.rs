use thiserror::Error;

/// Errors raised by constructions and checks in this crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GoaError {
    /// Malformed or out-of-range input.
    #[error("input error: {0}")]
    Input(String),
    /// An identity or invariant that should hold did not.
    #[error("verification failure: {0}")]
    Verification(String),
    /// A search or closure ran past its budget.
    #[error("resource limit exceeded: {what} (reached {reached})")]
    Resource { what: String, reached: usize },
}

impl GoaError {
    pub fn input(msg: impl Into<String>) -> Self {
        GoaError::Input(msg.into())
    }

    pub fn verification(msg: impl Into<String>) -> Self {
        GoaError::Verification(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, GoaError>;

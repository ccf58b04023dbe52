use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("group order {order} exceeds the cap of {cap}")]
    OrderCapExceeded { order: u128, cap: usize },

    #[error("resource budget exceeded: {0}")]
    BudgetExceeded(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Errors caused by size limits rather than malformed input.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::OrderCapExceeded { .. } | Error::BudgetExceeded(_))
    }
}

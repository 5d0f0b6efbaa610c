use thiserror::Error;

/// Errors shared by every solver and parser in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{what}: node budget of {limit} exhausted")]
    BudgetExceeded { what: &'static str, limit: u64 },

    #[error("{what}: instance of size {size} exceeds the limit of {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    /// Two independent computations disagreed, or a post-hoc certificate check failed.
    #[error("internal consistency failure: {0}")]
    Inconsistency(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for the resource-limit variants (budget and size limits).
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. } | Error::TooLarge { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;

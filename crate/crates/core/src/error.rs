use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("no packable items")]
    NoPackableItems,

    #[error("unknown item id {0}")]
    UnknownItem(usize),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("small-profit item not pre-filtered (item {0})")]
    SmallProfitItem(usize),

    #[error("item {0} is not large (profit at or below the large-item threshold)")]
    NotLarge(usize),

    #[error("configuration not realizable: class {class} needs {needed} items, reduced set holds {available}")]
    UnrealizableConfiguration {
        class: usize,
        needed: usize,
        available: usize,
    },

    #[error("exhaustive enumeration refused for n = {0} > 25; use the dp oracle")]
    EnumerationTooLarge(usize),

    #[error("dp table needs {required} cells, budget is {budget}")]
    DpBudgetExceeded { required: u128, budget: u128 },

    #[error("lattice enumeration exceeded ceiling of {ceiling} points (counted {counted} so far)")]
    CeilingExceeded { ceiling: u64, counted: u64 },

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors caused by bad user input rather than a broken invariant.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Internal(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

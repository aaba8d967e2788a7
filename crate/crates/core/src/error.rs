use thiserror::Error;

/// Errors raised across the crate.
///
/// `BudgetExhausted` is a control signal rather than a failure: the optimizer
/// treats it as normal termination.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("evaluation budget of {budget} exhausted")]
    BudgetExhausted { budget: usize },
    #[error("non-finite objective value at x = {x:?}: {values:?}")]
    NonFinite { x: Vec<f64>, values: Vec<f64> },
    #[error("diagnostic: {0}")]
    Diagnostic(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn is_budget_exhausted(&self) -> bool {
        matches!(self, Error::BudgetExhausted { .. })
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

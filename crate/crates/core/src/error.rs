use thiserror::Error;

/// Failures raised by the multiplier evaluators and the ledger simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside the domain of the formula being evaluated.
    #[error("invalid {param}: {reason}")]
    Domain { param: &'static str, reason: String },

    /// The brute-force nested evaluator would need more terms than allowed.
    #[error("nested evaluation needs {terms} terms, budget is {budget}")]
    OracleBudget { terms: u128, budget: u64 },

    /// The multiplier left the finite range of `f64`.
    #[error("multiplier overflowed at level {level}; use the log-space evaluator")]
    Overflow { level: u32 },

    /// The simulator produced more ledger events than its configured limit.
    #[error("simulation exceeded the event budget of {limit}")]
    EventBudget { limit: usize },

    /// A ledger event log failed validation during replay or parsing.
    #[error("ledger integrity violation: {0}")]
    Integrity(String),
}

impl Error {
    pub(crate) fn domain(param: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            param,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

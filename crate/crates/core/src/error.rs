use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An intermediate natural number exceeded the configured digit cap.
    #[error("numeric blow-up: {0}")]
    NumericBlowup(String),
    /// A hierarchy prefix is too short to answer a query.
    #[error("hierarchy not known beyond {0}")]
    UnknownBeyondPrefix(String),
    /// An upgrade needed by a base change is infinite.
    #[error("upgrade of {0} is infinite")]
    InfiniteUpgrade(String),
    /// An iteration exceeded its step budget.
    #[error("step budget of {0} exceeded")]
    BudgetExceeded(u64),
    /// The n_* candidate search exceeded its budget.
    #[error("search budget of {0} candidates exceeded")]
    SearchBudgetExceeded(u64),
    /// Malformed ordinal term.
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    /// An argument violates an operation's precondition.
    #[error("invalid argument: {0}")]
    Invalid(String),
    /// A classification cannot be decided from the available data.
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    /// An internal invariant failed; indicates a bug or a false assumption.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// True for errors that signal an exhausted budget rather than a defect.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::NumericBlowup(_)
                | Error::BudgetExceeded(_)
                | Error::SearchBudgetExceeded(_)
                | Error::UnknownBeyondPrefix(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("singular conductance matrix at t={time}s (disconnected subgraph without a path to ground)")]
    SingularCircuit { time: f64 },

    #[error("non-finite solution at t={time}s; reduce dt")]
    NumericalInstability { time: f64 },

    #[error("normal equations are singular; use a ridge penalty lambda > 0")]
    IllConditioned,

    #[error("gradient descent diverged at epoch {epoch} (objective {objective} vs start {start}); reduce the learning rate")]
    Diverged { epoch: usize, objective: f64, start: f64 },

    #[error("target has zero variance")]
    ZeroVariance,

    #[error("rule table has no entry for state {state} with {count} excited neighbours")]
    MalformedRuleTable { state: &'static str, count: usize },

    #[error("cell {0} cannot be reached from the source")]
    Unreachable(usize),

    #[error("cell {0} is failed")]
    FailedCell(usize),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParams(msg.into())
    }
}

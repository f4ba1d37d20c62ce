use thiserror::Error;

/// Errors raised across the sampling toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported feature: {0}")]
    Unsupported(String),

    #[error("invalid envelope: {0}")]
    InvalidEnvelope(String),

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("evaluation budget exceeded: {needed} evaluations requested, budget is {budget}")]
    Budget { needed: u64, budget: u64 },

    #[error("refinement schedule contract violated: {0}")]
    ScheduleContract(String),

    #[error("mode not found: gradient norm {grad_norm:e} after {iterations} iterations")]
    NoMode { grad_norm: f64, iterations: usize },

    #[error("insufficient data: {got} observations, need at least {need}")]
    InsufficientData { got: usize, need: usize },

    #[error("invalid config: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Config(e.to_string())
    }
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

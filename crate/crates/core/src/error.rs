use thiserror::Error;

/// Errors raised anywhere in the source model, the solvers and the front end.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A source index outside `1..=source_count`.
    #[error("source index {index} out of range 1..={source_count}")]
    IndexOutOfRange { index: usize, source_count: usize },

    /// The exact matching oracle only handles desk-scale instances.
    #[error("instance too large for exact matching: {0}")]
    TooLarge(String),

    /// An iterative solver did not converge within its budget.
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    /// A root search bracket does not contain a sign change.
    #[error("search error: {0}")]
    Search(String),

    /// A malformed configuration document.
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

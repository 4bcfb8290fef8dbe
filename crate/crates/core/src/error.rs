use thiserror::Error;

/// Errors raised by the solver suite.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration is inconsistent or unsupported.
    #[error("configuration error: {0}")]
    Config(String),

    /// An API was called with mismatched shapes or lengths.
    #[error("usage error: {0}")]
    Usage(String),

    /// A direct solver met a (numerically) zero pivot.
    #[error("singular system: {0}")]
    Singular(String),

    /// A numerical oracle did not reach its tolerance.
    #[error("oracle did not converge: {0}")]
    Oracle(String),

    /// A computed quantity violated an invariant that the formulas guarantee.
    #[error("internal error: {0}")]
    Internal(String),

    /// A time step failed; wraps the underlying cause with the level.
    #[error("step {level} failed: {source}")]
    Step {
        level: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

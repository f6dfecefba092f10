use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("branch error: {0}")]
    Branch(String),
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("division by zero: {0}")]
    Division(String),
    #[error("{what} did not converge after {iterations} iterations (error estimate {estimate:e})")]
    NoConvergence {
        what: String,
        iterations: usize,
        estimate: f64,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("singular system: {0}")]
    Singular(String),
    #[error("parse error in {context}: {message}")]
    Parse { context: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

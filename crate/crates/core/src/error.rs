//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller supplied data outside the documented domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An operation precondition does not hold for the given arguments.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Text could not be parsed; `line` is 1-based.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A matrix entry fell outside every clique block.
    #[error("decomposition coverage gap: {0}")]
    Coverage(String),

    /// The least-squares normal matrix is singular.
    #[error("singular least-squares system: {0}")]
    SingularFit(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

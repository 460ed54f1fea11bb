use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FalloutError {
    /// Malformed or inconsistent input data.
    #[error("input error: {0}")]
    Input(String),
    /// Structured-text parse failure with location.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("not positively branched: {0}")]
    NotPositivelyBranched(String),
    /// Frame or Jacobian too close to singular to trust.
    #[error("conditioning error: {0}")]
    Conditioning(String),
    /// Sampling too coarse to resolve a geometric event.
    #[error("resolution error: {0}")]
    Resolution(String),
    #[error("convergence error: {0}")]
    Convergence(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("out of scope: {0}")]
    Scope(String),
    #[error("degenerate data: {0}")]
    Degenerate(String),
}

impl FalloutError {
    /// True for failures caused by the input text rather than the numerics.
    pub fn is_input(&self) -> bool {
        matches!(self, FalloutError::Input(_) | FalloutError::Parse { .. })
    }
}

pub type Result<T> = std::result::Result<T, FalloutError>;

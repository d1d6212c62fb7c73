use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FogError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),

    #[error("objective evaluated to {value} at x = {x}")]
    Evaluation { x: f64, value: f64 },

    #[error("no convergence after {iterations} iterations (bracket width {width:e})")]
    Convergence { iterations: usize, width: f64 },
}

impl FogError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        FogError::InvalidArgument(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, FogError>;

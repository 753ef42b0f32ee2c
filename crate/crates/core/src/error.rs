use thiserror::Error;

pub type Result<T> = std::result::Result<T, GaborError>;

#[derive(Debug, Error)]
pub enum GaborError {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("size limit exceeded: group order {order} is above the bound {bound}")]
    SizeLimit { order: usize, bound: usize },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

use thiserror::Error;

/// Errors raised by the channel, coverage, planner and scenario models.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid environment profile `{name}`: {reason}")]
    InvalidEnvironment { name: String, reason: String },
    #[error("invalid radio configuration: {0}")]
    InvalidRadio(String),
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("invalid range: {0}")]
    InvalidRange(String),
}

pub type Result<T> = std::result::Result<T, ModelError>;

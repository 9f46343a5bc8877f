use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or out-of-range input.
    #[error("parameter error: {0}")]
    Parameter(String),
    /// The engine cannot evaluate invariants on this model.
    #[error("unsupported model: {0}")]
    UnsupportedModel(String),
    /// The request is well formed but outside what the comparison supports.
    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}

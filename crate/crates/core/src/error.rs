use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("eta = {eta} is outside the domain of the {kind} CGF (boundary at {boundary})")]
    Domain {
        kind: &'static str,
        eta: f64,
        boundary: f64,
    },

    #[error("{what} is not available for {model}: {hint}")]
    Unsupported {
        what: &'static str,
        model: &'static str,
        hint: &'static str,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("run failed: {0}")]
    Runtime(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}

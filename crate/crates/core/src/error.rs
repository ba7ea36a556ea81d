use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// An enumeration or allocation would exceed its configured limit.
    #[error("{what} refused: size estimate {estimate:.3e} exceeds guard {limit:.3e}")]
    GuardExceeded {
        what: &'static str,
        estimate: f64,
        limit: f64,
    },

    #[error("malformed message: {0}")]
    MalformedMessage(String),

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("check failed: {0}")]
    CheckFailed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }
}

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("{what} = {value} exceeds the configured cap of {cap}")]
    Capacity {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("no root: {0}")]
    NoRoot(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    /// True for errors caused by the caller's arguments rather than I/O.
    pub fn is_parameter_error(&self) -> bool {
        matches!(
            self,
            Error::Parameter(_)
                | Error::Capacity { .. }
                | Error::Input(_)
                | Error::Parse { .. }
                | Error::NoRoot(_)
        )
    }
}

pub(crate) fn param(msg: impl Into<String>) -> Error {
    Error::param(msg)
}

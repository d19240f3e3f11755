use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("config error at {key} (line {line}): {message}")]
    Config { key: String, line: usize, message: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("singular system at omega = {omega}: {message}")]
    Singular { omega: f64, message: String },

    #[error("degenerate stationary subspace: {0}")]
    DegenerateSteadyState(String),

    #[error("method unavailable: {0}")]
    MethodUnavailable(String),

    #[error("integration horizon too short: {message} (try t_max >= {suggested_t_max:.6e})")]
    HorizonTooShort { message: String, suggested_t_max: f64 },

    #[error("Fock cutoff did not converge below cap {cap}: last relative change {last_change:.3e}")]
    CutoffNotConverged { cap: usize, last_change: f64 },

    #[error("invariant failure: {0}")]
    Invariant(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit status for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::InvalidInput(_) | Error::Io(_) => 2,
            Error::Invariant(_) => 4,
            _ => 3,
        }
    }

    pub fn config(key: impl Into<String>, line: usize, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            line,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

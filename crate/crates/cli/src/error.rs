use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid scenario:\n  {}", .0.join("\n  "))]
    Validation(Vec<String>),
    #[error("unknown controller `{0}` (expected pid, dwa or wall)")]
    UnknownController(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("no runs: {0}")]
    NoRuns(&'static str),
    #[error("record has no samples")]
    EmptyLog,
    #[error(transparent)]
    Core(#[from] navbench_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit status for this error: 2 for bad input, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Validation(_) | Error::UnknownController(_) | Error::Parse(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

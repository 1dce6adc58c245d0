use thiserror::Error;

/// Errors raised by the scheduling library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("instance parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("market data error at row {row}: {message}")]
    Ingest { row: usize, message: String },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("operation ({job},{op}) starting at {start} with duration {duration} overruns horizon {horizon}")]
    Horizon {
        job: usize,
        op: usize,
        start: usize,
        duration: usize,
        horizon: usize,
    },

    #[error("correlation undefined: {0}")]
    UndefinedCorrelation(String),

    #[error("invalid schedule: {}", .0.join("; "))]
    Validation(Vec<String>),

    #[error("limit exceeded: {0}")]
    Limit(String),

    #[error("selection error: {0}")]
    Selection(String),

    #[error("report error: {0}")]
    Report(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit status for command-line front ends: 3 for refusals on
    /// size limits, 2 for everything caused by bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Limit(_) => 3,
            Error::Selection(_) => 1,
            _ => 2,
        }
    }
}

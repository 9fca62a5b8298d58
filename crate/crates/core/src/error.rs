use thiserror::Error;

/// Errors produced by every fallible operation in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed edge-list input; `line` is 1-based.
    #[error("{message} at line {line}")]
    Parse { line: usize, message: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("dimension {n} exceeds dense cap {cap}")]
    SizeCap { n: usize, cap: usize },

    #[error("kernel mismatch: {0}")]
    KernelMismatch(String),

    #[error("conjugate gradient did not converge after {iterations} iterations (relative residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("rows exceed the leverage limit 1/alpha = {limit:e}: {indices:?}")]
    HighLeverageRows { limit: f64, indices: Vec<usize> },

    #[error("illegal move on row {row} with p = {p}: {reason}")]
    IllegalMove { row: usize, p: f64, reason: String },

    /// An internal guarantee or a guarantee demanded from a collaborator failed.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the command-line tool: 2 for bad input, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. }
            | Error::InvalidInput(_)
            | Error::Precondition(_)
            | Error::Io(_)
            | Error::Json(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

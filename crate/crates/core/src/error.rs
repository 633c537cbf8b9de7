use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("outside the domain: {0}")]
    Domain(String),

    #[error("too close to the singular radius r = 1: {0}")]
    NearSingularity(String),

    #[error("accuracy not achieved: requested {requested:e}, best bound {achieved:e}")]
    AccuracyNotAchieved { requested: f64, achieved: f64, value: f64 },

    #[error("refused: {0}")]
    Refused(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

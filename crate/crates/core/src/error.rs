use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("missing file: {0}")]
    MissingFile(PathBuf),

    #[error("failed to parse {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("location ({x}, {y}) is outside the 120x80 pitch")]
    OutOfBounds { x: f64, y: f64 },

    #[error("shot taken from the goal line (x = 120) has no shot triangle")]
    GoalLineShot,

    #[error("player {0:?} does not appear in the data")]
    UnknownPlayer(String),

    #[error("unmapped position label {0:?}")]
    UnknownPosition(String),

    #[error("column {0:?} has zero variance in the data")]
    ConstantColumn(String),

    #[error("design matrix is rank deficient")]
    RankDeficient,

    #[error("column mismatch: expected {expected:?}, found {found:?}")]
    ColumnMismatch {
        expected: Vec<String>,
        found: Vec<String>,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("value {0} is outside the distribution support")]
    OutsideSupport(f64),

    #[error("invalid distribution parameters: {0}")]
    InvalidParameters(String),

    #[error("non-finite gradient encountered in chain {chain} at iteration {iteration}")]
    NonFiniteGradient { chain: usize, iteration: usize },

    #[error("diagnostics need at least {min_chains} chains of {min_draws} draws")]
    InsufficientDraws { min_chains: usize, min_draws: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("group vector does not align with predictions")]
    GroupMismatch,

    #[error("group {0:?} has no observations")]
    EmptyGroup(String),

    #[error("player {0:?} is not part of the fitted grouping")]
    MissingPlayer(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, message: impl ToString) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

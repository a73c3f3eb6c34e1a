use thiserror::Error;

/// Errors produced by the zenscope library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error in {path}: {message}")]
    Csv { path: String, message: String },
    #[error("parse error at row {row}, column \"{column}\": {message}")]
    Parse {
        row: usize,
        column: String,
        message: String,
    },
    #[error("duplicate ticker \"{0}\"")]
    DuplicateTicker(String),
    #[error("dates not strictly increasing at row {row} ({date})")]
    NonMonotoneDates { row: usize, date: String },
    #[error("no observations")]
    NoObservations,
    #[error("no columns remain")]
    NoColumnsRemain,
    #[error("column \"{0}\" is entirely missing")]
    AllMissing(String),
    #[error("missing values present in column \"{0}\"")]
    MissingValues(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("optimizer failed: {message}")]
    OptimizerFailed {
        message: String,
        best: Option<Box<crate::margins::MarginalFit>>,
    },
    #[error("insufficient corner mass: {found} observations in the corner, need at least {needed}")]
    InsufficientCornerMass { found: usize, needed: usize },
    #[error("projection to a correlation matrix failed: {0}")]
    Projection(String),
    #[error("layout collision at step {step}: cell ({row}, {col}) already occupied")]
    LayoutCollision { step: usize, row: i64, col: i64 },
    #[error("layout axis conflict at step {step}: consecutive moves inside a group must alternate between horizontal and vertical")]
    AxisConflict { step: usize },
    #[error("{0}: {1}")]
    Context(String, #[source] Box<Error>),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn context(self, what: impl Into<String>) -> Self {
        Error::Context(what.into(), Box::new(self))
    }

    /// True for errors caused by the caller's input rather than an internal fault.
    pub fn is_user_error(&self) -> bool {
        match self {
            Error::OptimizerFailed { .. } | Error::Projection(_) => false,
            Error::Context(_, inner) => inner.is_user_error(),
            _ => true,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

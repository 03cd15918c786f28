use thiserror::Error;

/// Error type shared by every analysis stage.
#[derive(Debug, Error)]
pub enum Error {
    #[error("insufficient data: need at least {needed} values, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("{0}")]
    Domain(String),

    #[error("degenerate distribution: zero variance")]
    DegenerateDistribution,

    #[error("segment {segment} has zero variance; F_q is undefined for q = {q}")]
    DegenerateSegment { segment: usize, q: f64 },

    #[error("fit range error: {0}")]
    FitRange(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("no overlapping support between PDFs")]
    NoOverlap,

    #[error("peak densities do not decay with lag (log-log slope {slope:.4} >= 0)")]
    NonDecayingPeak { slope: f64 },

    #[error("fitted stability index {mu:.4} lies outside (0, 2]")]
    StabilityViolation { mu: f64 },

    #[error("generator error: {0}")]
    Generator(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("stage `{stage}` not computed")]
    NotComputed { stage: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: String,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Attach the pipeline stage that produced this error.
    pub fn in_stage(self, stage: &str) -> Error {
        Error::Stage {
            stage: stage.to_string(),
            source: Box::new(self),
        }
    }

    /// Process exit code: 3 for data problems, 4 for numerical failures.
    /// Usage errors (code 2) are handled by the argument parser.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Numerical(_)
            | Error::NonDecayingPeak { .. }
            | Error::StabilityViolation { .. } => 4,
            Error::Stage { source, .. } => source.exit_code(),
            _ => 3,
        }
    }
}

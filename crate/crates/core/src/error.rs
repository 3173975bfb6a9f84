use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("alpha + beta = {sum} >= 1: the process has no stationary start")]
    NonStationary { sum: f64 },

    #[error("conditional variance {value} <= 0 at step {step} during simulation")]
    NonPositiveVariance { step: usize, value: f64 },

    #[error("invalid series: {0}")]
    InvalidSeries(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("need at least {need} samples, got {got}")]
    InsufficientSamples { got: usize, need: usize },

    #[error("degenerate scatter: sample covariance is identically zero")]
    DegenerateScatter,

    #[error("scatter matrix is not positive definite even after regularization")]
    NotPositiveDefinite,

    #[error("series has zero variance")]
    ZeroVariance,

    #[error("no self-consistent autocorrelation window below lag {t_max}")]
    ActNotConverged { t_max: usize },

    #[error("starting point is outside the admissible region")]
    InadmissibleStart,

    #[error("warm-up never reached the admissible region")]
    StuckInadmissible,

    #[error("parameter {0} missing from report")]
    MissingParameter(String),

    #[error("data hash mismatch: expected {expected}, found {found}")]
    DataHashMismatch { expected: String, found: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{phase}: {source}")]
    Phase {
        phase: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by bad input rather than by a failed computation.
    pub fn is_validation(&self) -> bool {
        match self {
            Error::InvalidParams(_)
            | Error::NonStationary { .. }
            | Error::InvalidSeries(_)
            | Error::InvalidConfig(_)
            | Error::Parse { .. } => true,
            Error::Io { source, .. } => source.kind() == std::io::ErrorKind::NotFound,
            Error::Phase { source, .. } => source.is_validation(),
            _ => false,
        }
    }
}

pub(crate) trait PhaseExt<T> {
    fn phase(self, phase: &'static str) -> Result<T>;
}

impl<T> PhaseExt<T> for Result<T> {
    fn phase(self, phase: &'static str) -> Result<T> {
        self.map_err(|e| Error::Phase {
            phase,
            source: Box::new(e),
        })
    }
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("curvature must be finite, got {0}")]
    NonFiniteCurvature(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("curvature mismatch: {left} vs {right}")]
    CurvatureMismatch { left: f64, right: f64 },

    #[error("point set does not lie in an open hemisphere")]
    HemisphereViolation,

    #[error("empty input")]
    EmptyInput,

    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("operation requires a {expected} regime, got κ = {kappa}")]
    RegimeMismatch { expected: &'static str, kappa: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

use thiserror::Error;

/// Errors produced by the Ball Mapper library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,

    #[error("invalid bounds: lower {lower} and upper {upper} must satisfy 0 <= lower < upper <= 100")]
    InvalidBounds { lower: f64, upper: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("length mismatch: expected {expected} values, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("epsilon must be positive and finite, got {0}")]
    InvalidEpsilon(f64),

    #[error("point order is not a permutation of 0..{0}")]
    InvalidOrder(usize),

    #[error("need at least {needed} points, found {found}")]
    TooFewPoints { needed: usize, found: usize },

    #[error("unknown aggregator `{0}` (expected mean, count, std_dev, min, max or proportion)")]
    UnknownAggregator(String),

    #[error("missing column `{0}`")]
    MissingColumn(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),

    #[error("malformed {format} document: {message}")]
    Parse { format: &'static str, message: String },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

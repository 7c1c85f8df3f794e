use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid box: {0}")]
    InvalidBox(String),
    #[error("shape mismatch: expected {expected}, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("unsupported dimension {0} (at most {1} supported)")]
    UnsupportedDimension(usize, usize),
    #[error("unknown dgp '{0}'")]
    UnknownDgp(String),
    #[error("invalid labels: {0}")]
    InvalidLabel(String),
    #[error("coverage undefined: no positive labels in the dataset")]
    UndefinedCoverage,
    #[error("validation set is empty")]
    EmptyValidation,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("simulation failed: {0}")]
    Simulation(String),
    #[error("box holds no ground-truth points")]
    UndefinedMu,
    #[error("data error: {0}")]
    Data(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

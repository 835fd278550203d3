use std::path::PathBuf;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot access {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid catalog: {0}")]
    InvalidCatalog(String),

    #[error("no annotations")]
    NoAnnotations,

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("featurizer mismatch: model expects `{expected}`, got `{actual}`")]
    FeaturizerMismatch { expected: String, actual: String },

    #[error("unknown instance id `{0}`")]
    UnknownId(String),

    #[error("undefined correlation: {0} is constant")]
    ConstantVector(&'static str),

    #[error("unsupported checkpoint version {0}")]
    UnsupportedVersion(u32),

    #[error("invalid checkpoint: {0}")]
    InvalidCheckpoint(String),

    #[error("translation failed ({provider}): {message}")]
    Translation { provider: String, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

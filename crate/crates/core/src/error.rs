use std::path::PathBuf;

/// Errors produced by series construction, resampling, perturbation and statistics.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("series is empty")]
    EmptySeries,
    #[error("value at index {index} is not finite")]
    NonFinite { index: usize },
    #[error("value at index {index} is negative ({value}) in a non-negative series")]
    Negative { index: usize, value: f64 },
    #[error("timestamp column has {timestamps} entries but series has {values} values")]
    TimestampMismatch { timestamps: usize, values: usize },

    #[error("{path}: file has no data rows")]
    EmptyFile { path: PathBuf },
    #[error("{path}: missing column `{column}`")]
    MissingColumn { path: PathBuf, column: String },
    #[error("{path}: unparseable value in data row {row}: {cell:?}")]
    UnparseableValue {
        path: PathBuf,
        row: usize,
        cell: String,
    },

    #[error("invalid chunk length {length} for series of length {series_len}")]
    InvalidChunkLength { length: usize, series_len: usize },
    #[error("invalid lag {lag}: must satisfy 1 <= lag < {series_len}")]
    InvalidLag { lag: usize, series_len: usize },
    #[error("invalid sash {sash}: window width 1+2*sash must not exceed series length {series_len}")]
    InvalidSash { sash: usize, series_len: usize },
    #[error("neighbor count k={k} too large: at most {max} candidates available")]
    KTooLarge { k: usize, max: usize },
    #[error("pool size p={p} too large: at most {max} candidate windows available")]
    PTooLarge { p: usize, max: usize },
    #[error("kernel has {kernel_len} ranks but {expected} neighbors were requested")]
    KernelLength { kernel_len: usize, expected: usize },
    #[error("parameter `{name}` must be positive")]
    NonPositive { name: &'static str },

    #[error("invalid distribution parameters: {0}")]
    InvalidDistributionParams(String),
    #[error("invalid clamp policy: alpha_max ({alpha_max}) must exceed alpha_min ({alpha_min})")]
    InvalidClamp { alpha_max: f64, alpha_min: f64 },
    #[error("probability {0} outside the open interval (0, 1)")]
    InvalidProbability(f64),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("series of length {len} too short for autocorrelation lag {lag}")]
    SeriesTooShort { len: usize, lag: usize },
    #[error("invalid threshold: {0}")]
    InvalidThreshold(String),
    #[error("ensemble is empty")]
    EmptyEnsemble,
    #[error("weight grid is empty")]
    EmptyGrid,
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("total load is zero")]
    ZeroLoad,
    #[error("window [{start}, {end}) outside series of length {len}")]
    OutOfRange { start: usize, end: usize, len: usize },

    #[error("ensemble manifest: {0}")]
    Manifest(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
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

    pub(crate) fn csv(path: impl Into<PathBuf>, source: csv::Error) -> Self {
        Error::Csv {
            path: path.into(),
            source,
        }
    }
}

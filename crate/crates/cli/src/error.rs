use synthseries::Error as LibError;

/// Failure classes; each maps to its own exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("numerical validation failed: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }

    pub fn io(context: impl std::fmt::Display, e: std::io::Error) -> Self {
        CliError::Io(format!("{context}: {e}"))
    }
}

impl From<LibError> for CliError {
    fn from(e: LibError) -> Self {
        let msg = e.to_string();
        match e {
            LibError::Io { .. }
            | LibError::Csv { .. }
            | LibError::Json(_)
            | LibError::EmptyFile { .. }
            | LibError::MissingColumn { .. }
            | LibError::UnparseableValue { .. } => CliError::Io(msg),
            LibError::InvalidChunkLength { .. }
            | LibError::InvalidLag { .. }
            | LibError::InvalidSash { .. }
            | LibError::KTooLarge { .. }
            | LibError::PTooLarge { .. }
            | LibError::KernelLength { .. }
            | LibError::NonPositive { .. }
            | LibError::InvalidDistributionParams(_)
            | LibError::InvalidClamp { .. }
            | LibError::InvalidProbability(_)
            | LibError::InvalidThreshold(_)
            | LibError::EmptyGrid
            | LibError::InvalidWeights(_)
            | LibError::OutOfRange { .. } => CliError::Config(msg),
            LibError::EmptySeries
            | LibError::NonFinite { .. }
            | LibError::Negative { .. }
            | LibError::TimestampMismatch { .. }
            | LibError::LengthMismatch { .. }
            | LibError::SeriesTooShort { .. }
            | LibError::EmptyEnsemble
            | LibError::ZeroLoad
            | LibError::Manifest(_) => CliError::Numerical(msg),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

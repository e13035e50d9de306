use kframe_core::KFrameError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}:{line}:{column}: parse error: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: field `{field}`: {message}")]
    Dimension {
        path: String,
        field: String,
        message: String,
    },
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(KFrameError),
    #[error("golden mismatch in {} assertion(s): {}", .0.len(), .0.join("; "))]
    GoldenMismatch(Vec<String>),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io_error",
            CliError::Parse { .. } => "parse_error",
            CliError::Dimension { .. } => "dimension_mismatch",
            CliError::Usage(_) => "usage_error",
            CliError::Core(e) => e.code(),
            CliError::GoldenMismatch(_) => "golden_mismatch",
        }
    }

    /// Process exit status: 1 failed verdict, 2 input or usage error,
    /// 3 internal consistency error.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Parse { .. } | CliError::Dimension { .. } | CliError::Usage(_) => 2,
            CliError::Core(e) if e.is_input_error() => 2,
            CliError::Core(e) if e.is_internal() => 3,
            CliError::Core(_) | CliError::GoldenMismatch(_) => 1,
        }
    }
}

impl From<KFrameError> for CliError {
    fn from(e: KFrameError) -> Self {
        CliError::Core(e)
    }
}

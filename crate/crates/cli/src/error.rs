use equilibria::Error as CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("unknown instance kind {0:?}")]
    UnknownKind(String),
    #[error("bad rational {0:?}")]
    BadRational(String),
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("solver error: {0}")]
    Solver(CoreError),
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("cap exceeded: {0}")]
    Cap(CoreError),
}

impl CliError {
    /// 0 success, 2 schema, 3 solver, 4 certification, 5 cap.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) | CliError::UnknownKind(_) | CliError::BadRational(_) | CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Certification(_) => 4,
            CliError::Cap(_) => 5,
        }
    }

    /// Errors raised while building core objects from a document are schema
    /// problems, not solver failures.
    pub fn schema(e: CoreError) -> Self {
        CliError::Schema(e.to_string())
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::SizeCapExceeded { .. }
            | CoreError::BitCapExceeded { .. }
            | CoreError::StepCapExceeded { .. }
            | CoreError::IterCapExceeded { .. }
            | CoreError::PivotLimitExceeded(_) => CliError::Cap(e),
            CoreError::CertificationFailed(msg) | CoreError::ValidationFailed(msg) => CliError::Certification(msg),
            other => CliError::Solver(other),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

use std::path::Path;
use std::process::ExitCode;

use aqa_core::corpus::CorpusError;
use aqa_core::eval::EvalError;
use aqa_core::retrieval::RetrievalError;
use aqa_core::DataError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("config: {0}")]
    Config(String),
    /// A question could not be analyzed or translated.
    #[error("{0}")]
    Linguistic(String),
    #[error("{0}")]
    Provider(String),
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }

    /// 1 environment or I/O, 2 linguistic failure, 3 search provider failure.
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Io(_) | CliError::Config(_) => 1,
            CliError::Linguistic(_) => 2,
            CliError::Provider(_) => 3,
        })
    }
}

impl From<DataError> for CliError {
    fn from(e: DataError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<RetrievalError> for CliError {
    fn from(e: RetrievalError) -> Self {
        match e {
            RetrievalError::Analysis(_) | RetrievalError::InvalidQuery(_) => CliError::Linguistic(e.to_string()),
            RetrievalError::ProviderUnavailable(_) => CliError::Provider(e.to_string()),
            RetrievalError::FetchFailed { .. } | RetrievalError::InvalidUrl { .. } => CliError::Io(e.to_string()),
        }
    }
}

use std::path::PathBuf;

use mdarisk::dataset::DatasetError;
use mdarisk::eval::EvalError;
use mdarisk::glm::GlmError;
use mdarisk::ingest::IngestError;
use mdarisk::lexicon::LexiconError;
use mdarisk::textprep::TextError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{key}: {message}")]
    Config { key: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    MissingInput(String),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Text(#[from] TextError),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Glm(#[from] GlmError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl CliError {
    pub fn name(&self) -> &'static str {
        match self {
            CliError::Config { .. } => "ConfigError",
            CliError::Usage(_) => "UsageError",
            CliError::Io { .. } => "IoError",
            CliError::MissingInput(_) => "MissingInput",
            CliError::Ingest(e) => e.name(),
            CliError::Text(e) => e.name(),
            CliError::Lexicon(e) => e.name(),
            CliError::Dataset(e) => e.name(),
            CliError::Glm(e) => e.name(),
            CliError::Eval(e) => e.name(),
        }
    }

    /// 2 for usage and configuration problems, 1 for data errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

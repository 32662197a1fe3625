use std::path::Path;

use thiserror::Error;

use condalg::bayes::BayesError;
use condalg::boolalg::BoolAlgError;
use condalg::dbl::DblError;
use condalg::prob::ProbError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {msg}")]
    File { path: String, msg: String },
    #[error(transparent)]
    Algebra(#[from] BoolAlgError),
    #[error(transparent)]
    Bayes(#[from] BayesError),
    #[error(transparent)]
    Prob(#[from] ProbError),
    #[error(transparent)]
    Dbl(#[from] DblError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn file(path: &Path, msg: impl ToString) -> Self {
        CliError::File { path: path.display().to_string(), msg: msg.to_string() }
    }
}

pub fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

pub fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

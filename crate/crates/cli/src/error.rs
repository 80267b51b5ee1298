use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("unknown suite `{0}` (known: {1})")]
    UnknownSuite(String, String),
    #[error("bad tolerance override `{0}`: expected KEY=VALUE with a nonnegative number")]
    BadTolerance(String),
    #[error("reading {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("parsing {path}: {source}")]
    Parse { path: PathBuf, source: toml::de::Error },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{context}: {source}")]
    Model { context: String, source: twistlab::Error },
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Attach a label to a core error.
pub trait Context<T> {
    fn context(self, what: &str) -> CliResult<T>;
}

impl<T> Context<T> for twistlab::Result<T> {
    fn context(self, what: &str) -> CliResult<T> {
        self.map_err(|source| CliError::Model { context: what.to_string(), source })
    }
}

use thiserror::Error;

/// Errors that abort a command with exit status 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown check `{0}` (see `torsionlab list`)")]
    UnknownCheck(String),
    #[error("{0}")]
    Usage(String),
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

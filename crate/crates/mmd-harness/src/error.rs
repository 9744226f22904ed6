use thiserror::Error;

use mmd::MmdError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid config: {0}")]
    Config(String),

    #[error("replicate {index}: {source}")]
    Replicate { index: usize, source: MmdError },

    #[error(transparent)]
    Estimator(#[from] MmdError),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, HarnessError>;

use thiserror::Error;

/// Everything that ends a command with exit code 2.
#[derive(Debug, Error)]
pub enum KitError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("{0}")]
    Core(#[from] spectral_core::Error),
}

impl From<std::io::Error> for KitError {
    fn from(e: std::io::Error) -> Self {
        KitError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for KitError {
    fn from(e: serde_json::Error) -> Self {
        KitError::Parse(e.to_string())
    }
}

impl KitError {
    /// Internal disagreements between independent computations count as
    /// check failures; everything else is a usage, parse or resource error.
    pub fn exit_code(&self) -> i32 {
        match self {
            KitError::Core(spectral_core::Error::Internal(_)) => 1,
            _ => 2,
        }
    }
}

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(qvlens_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<qvlens_core::Error> for CliError {
    /// Rejected inputs are configuration errors; everything else is numerical.
    fn from(e: qvlens_core::Error) -> Self {
        match e {
            qvlens_core::Error::InvalidParameter { .. } | qvlens_core::Error::Domain(_) => {
                CliError::Config(e.to_string())
            }
            other => CliError::Numerical(other),
        }
    }
}

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("check failed: {0}")]
    Check(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Check(_) => 1,
        }
    }
}

impl From<crosslation::Error> for CliError {
    fn from(e: crosslation::Error) -> Self {
        use crosslation::Error as E;
        match e {
            E::NoCrossings | E::EmptyClass(_) | E::UntrustedEvent(_) | E::GridMismatch | E::Numerical(_) => {
                CliError::Numeric(e.to_string())
            }
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

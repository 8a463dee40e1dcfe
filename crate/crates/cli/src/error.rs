use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("tolerance exceeded: {0}")]
    Tolerance(String),
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Tolerance(_) => 4,
        }
    }
}

impl From<smaps::Error> for CliError {
    fn from(e: smaps::Error) -> Self {
        use smaps::Error as E;
        match e {
            E::NotCompletelyEntangled(_) | E::NotMaximallyEntangled(_) | E::SupportMismatch(_) => {
                CliError::Precondition(e.to_string())
            }
            E::IdentityViolated { .. } | E::FactorizationResidual(_) | E::Decomposition(_) => {
                CliError::Tolerance(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Resource(_) => 3,
            CliError::Numeric(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl From<torwave::Error> for CliError {
    fn from(e: torwave::Error) -> Self {
        use torwave::Error as E;
        let msg = e.to_string();
        match e {
            E::ResourceBudget { .. } => CliError::Resource(msg),
            E::NumericAbort { .. }
            | E::SmallDivisor { .. }
            | E::Positivity { .. }
            | E::ZetaGuard { .. }
            | E::SingularMultiplier { .. } => CliError::Numeric(msg),
            _ => CliError::Config(msg),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(std::io::Error::other(e.to_string()))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(std::io::Error::other(e.to_string()))
    }
}

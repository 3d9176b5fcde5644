use std::fmt;
use std::process::ExitCode;

/// Failures mapped to the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Exit code 1: a validation check failed or a computation broke down.
    Failure(String),
    /// Exit code 2: the request itself is invalid.
    Input(String),
    /// Exit code 3: the sample budget is too small.
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Failure(_) => 1,
            CliError::Input(_) => 2,
            CliError::Budget(_) => 3,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            CliError::Failure(m) | CliError::Input(m) | CliError::Budget(m) => m,
        };
        // Diagnostics are single-line.
        write!(f, "{}", msg.replace('\n', " "))
    }
}

impl From<ginibre::Error> for CliError {
    fn from(e: ginibre::Error) -> Self {
        use ginibre::Error as E;
        match e {
            E::BudgetExhausted(_) => CliError::Budget(e.to_string()),
            E::Domain(_)
            | E::Dimension(_)
            | E::InvalidRegime(_)
            | E::LowerHalfPlane { .. }
            | E::EmptyWindow
            | E::NotAntisymmetric { .. } => CliError::Input(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(format!("i/o error: {e}"))
    }
}

use thiserror::Error;

/// Failures of a command, each tied to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Solver(#[from] tubewave::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for bad input, 3 for solver failure, 4 for a failed residual gate.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Solver(e) if e.is_input_error() => 2,
            CliError::Solver(tubewave::Error::ResidualTooLarge { .. }) => 4,
            CliError::Solver(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

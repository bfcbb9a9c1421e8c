use bsi_core::BsiError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments or unreadable / malformed input. Exit code 2.
    #[error("input error: {0}")]
    Input(String),
    /// The computation is undefined for this data. Exit code 3.
    #[error("degenerate: {0}")]
    Degenerate(String),
    /// Writing results failed. Exit code 1.
    #[error("i/o error: {0}")]
    Output(String),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Degenerate(_) => 3,
            CliError::Output(_) => 1,
        }
    }
}

impl From<BsiError> for CliError {
    fn from(e: BsiError) -> Self {
        match e {
            BsiError::Domain(_) => CliError::Input(e.to_string()),
            BsiError::DivergenceSupport { .. }
            | BsiError::DegenerateGeometry { .. }
            | BsiError::DegenerateRescale { .. }
            | BsiError::Generation(_) => CliError::Degenerate(e.to_string()),
        }
    }
}

use std::path::PathBuf;

use zeno_core::Error as CoreError;

/// Process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum ExitCode {
    Ok = 0,
    Failure = 1,
    Schema = 2,
    Markovianity = 3,
    Resonance = 4,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Schema(String),
    #[error("noise model is not Markovian: {0}")]
    Markovianity(String),
    #[error("control violates the resonance condition: {0}")]
    Resonance(String),
    #[error("{failed} verification check(s) failed")]
    Verification { failed: usize },
    #[error("numerical failure: {0}")]
    Numerical(CoreError),
    #[error("cannot read {path}: {source}")]
    Input { path: PathBuf, source: std::io::Error },
    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Schema(_) | CliError::Input { .. } => ExitCode::Schema,
            CliError::Markovianity(_) => ExitCode::Markovianity,
            CliError::Resonance(_) => ExitCode::Resonance,
            CliError::Verification { .. } | CliError::Numerical(_) | CliError::Output(_) => ExitCode::Failure,
        }
    }

    pub fn schema(msg: impl Into<String>) -> Self {
        CliError::Schema(msg.into())
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        use CoreError::*;
        match e {
            NonMarkovian { .. } | NegativeRate { .. } => CliError::Markovianity(e.to_string()),
            ResonanceViolation { .. } => CliError::Resonance(e.to_string()),
            NotSquare { .. }
            | DimensionMismatch { .. }
            | NonFinite { .. }
            | NotHermitian { .. }
            | InvalidDensityMatrix { .. }
            | NotNormalized { .. }
            | MixedState { .. }
            | Domain { .. }
            | InvalidArgument(_) => CliError::Schema(e.to_string()),
            _ => CliError::Numerical(e),
        }
    }
}

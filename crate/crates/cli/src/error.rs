//! Error-to-exit-code mapping. The contract is stable for scripting:
//! 0 success, 1 input or I/O error, 2 unstable network, 3 section geometry
//! error.

use symplecta_core::dynamics::DynamicsError;
use symplecta_core::pipeline::PipelineError;
use symplecta_core::quantum::QuantumError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("unstable normal mode(s) {0:?}: coupling exceeds the stability bound")]
    Unstable(Vec<usize>),
    #[error("{0}")]
    Geometry(String),
    #[error("{failed} of {total} checks failed")]
    ChecksFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Unstable(_) => 2,
            CliError::Geometry(_) => 3,
            CliError::ChecksFailed { .. } => 1,
        }
    }

    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::UnstableMode { modes } => CliError::Unstable(modes),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<DynamicsError> for CliError {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::Pipeline(p) => p.into(),
            DynamicsError::IndefiniteSection => CliError::Geometry(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<QuantumError> for CliError {
    fn from(e: QuantumError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(format!("i/o error: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(format!("json error: {e}"))
    }
}

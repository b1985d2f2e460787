use cimlab_core::lattice::LatticeError;
use cimlab_core::{GroupError, StructuredError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("{0}")]
    Engine(String),
    #[error("too large: {0}")]
    Overflow(String),
    #[error("engines disagree: {0}")]
    Disagreement(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for an oracle mismatch, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Disagreement(_) => 2,
            _ => 1,
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::BadPermutation(_) | GroupError::Mismatch { .. } => CliError::Parse(e.to_string()),
            GroupError::EnumerationOverflow { .. } => CliError::Overflow(e.to_string()),
            _ => CliError::Engine(e.to_string()),
        }
    }
}

impl From<StructuredError> for CliError {
    fn from(e: StructuredError) -> Self {
        match e {
            StructuredError::Invalid(_) | StructuredError::NotAnElement(_) => CliError::Invalid(e.to_string()),
            StructuredError::Group(g) => g.into(),
            other => CliError::Engine(other.to_string()),
        }
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::Group(g) => g.into(),
            LatticeError::Overflow { .. } => CliError::Overflow(e.to_string()),
            other => CliError::Engine(other.to_string()),
        }
    }
}

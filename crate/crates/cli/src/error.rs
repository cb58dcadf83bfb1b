use std::path::Path;

use icc_core::gap::GapError;
use icc_core::generator::GeneratorError;
use icc_core::{CnfError, FormatError, ModelError, ReductionError, SolverError};

pub const OK: u8 = 0;
pub const INFEASIBLE: u8 = 10;
pub const UNKNOWN: u8 = 20;
pub const USAGE: u8 = 1;
pub const FORMAT: u8 = 2;
pub const INTERNAL: u8 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub msg: String,
}

impl CliError {
    pub fn new(code: u8, msg: impl Into<String>) -> Self {
        CliError { code, msg: msg.into() }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::new(USAGE, msg)
    }

    pub fn format(path: &Path, e: impl std::fmt::Display) -> Self {
        CliError::new(FORMAT, format!("{}: {e}", path.display()))
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::new(FORMAT, e.to_string())
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::new(FORMAT, e.to_string())
    }
}

impl From<CnfError> for CliError {
    fn from(e: CnfError) -> Self {
        let code = match e {
            CnfError::Capacity { .. } | CnfError::TooFewVariables(_) => USAGE,
            _ => FORMAT,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<ReductionError> for CliError {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::Cnf(e) => e.into(),
            ReductionError::Model(e) => e.into(),
            ReductionError::NotSatisfying(_) | ReductionError::InconsistentOccurrences { .. } => {
                CliError::new(INFEASIBLE, e.to_string())
            }
            ReductionError::Map { .. }
            | ReductionError::LengthMismatch { .. }
            | ReductionError::AssignmentLength { .. } => CliError::new(FORMAT, e.to_string()),
            _ => CliError::new(INTERNAL, e.to_string()),
        }
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        let code = match e {
            SolverError::Inconsistent(_) | SolverError::Model(_) | SolverError::DomainLength { .. } => FORMAT,
            SolverError::Capacity { .. } => USAGE,
            _ => INTERNAL,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<GapError> for CliError {
    fn from(e: GapError) -> Self {
        match e {
            GapError::Reduction(e) => e.into(),
            GapError::Model(e) => e.into(),
            GapError::Mismatch(_) => CliError::new(FORMAT, e.to_string()),
            GapError::Degree(_) | GapError::Nonpositive(_) | GapError::Capacity { .. } => {
                CliError::new(USAGE, e.to_string())
            }
            _ => CliError::new(INTERNAL, e.to_string()),
        }
    }
}

impl From<GeneratorError> for CliError {
    fn from(e: GeneratorError) -> Self {
        CliError::usage(e.to_string())
    }
}

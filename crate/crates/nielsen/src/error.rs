use std::path::PathBuf;

use nielsen_core::density::DensityError;
use nielsen_core::dynamics::DynamicsError;
use nielsen_core::endo::EndoError;
use nielsen_core::periodic::PeriodicError;
use nielsen_core::WagnerError;
use thiserror::Error;

use crate::format::ParseError;

/// Exit status for success.
pub const EXIT_OK: u8 = 0;
/// Usage errors, including malformed input and unreadable files.
pub const EXIT_USAGE: u8 = 1;
/// The map fails a precondition that certifies the answer, or a membership check is false.
pub const EXIT_REFUSED: u8 = 2;
/// A length cap or enumeration budget was exceeded.
pub const EXIT_RESOURCE: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("io: {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("parse: {0}")]
    Parse(#[from] ParseError),
    #[error("endo: {0}")]
    Endo(#[from] EndoError),
    #[error("wagner: {0}")]
    Wagner(#[from] WagnerError),
    #[error("dynamics: {0}")]
    Dynamics(#[from] DynamicsError),
    #[error("periodic: {0}")]
    Periodic(#[from] PeriodicError),
    #[error("density: {0}")]
    Density(#[from] DensityError),
    /// A `--check` that evaluated to false, or a computation that stopped at a cap
    /// after its partial output was written.
    #[error("{message}")]
    Status { message: String, code: u8 },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } | CliError::Parse(_) => EXIT_USAGE,
            CliError::Endo(EndoError::LengthCapExceeded { .. }) => EXIT_RESOURCE,
            CliError::Endo(_) => EXIT_USAGE,
            CliError::Wagner(WagnerError::NoRemnant { .. }) => EXIT_REFUSED,
            CliError::Dynamics(e) => match e {
                DynamicsError::NoRemnant { .. } | DynamicsError::NotInSl { .. } => EXIT_REFUSED,
                DynamicsError::CapExceeded { .. } | DynamicsError::LengthCap(_) | DynamicsError::NonConvergence { .. } => {
                    EXIT_RESOURCE
                }
                DynamicsError::EmptyRange => EXIT_USAGE,
            },
            CliError::Periodic(e) => match e {
                PeriodicError::BudgetExceeded { .. } => EXIT_RESOURCE,
                PeriodicError::NotInSl { .. } => EXIT_REFUSED,
                PeriodicError::PeriodTooSmall { .. } => EXIT_USAGE,
            },
            CliError::Density(e) => match e {
                DensityError::BudgetExceeded { .. } => EXIT_RESOURCE,
                _ => EXIT_USAGE,
            },
            CliError::Status { code, .. } => *code,
        }
    }
}

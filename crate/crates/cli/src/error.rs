use std::path::PathBuf;

use spr3_core::Error as ModelError;
use thiserror::Error;

/// Errors reported by the scenario runner, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Model(#[from] ModelError),

    #[error("scenario {name}: {source}")]
    Scenario {
        name: String,
        #[source]
        source: Box<CliError>,
    },
}

impl CliError {
    pub const CONFIG: i32 = 2;
    pub const ADMISSIBILITY: i32 = 3;
    pub const NUMERICAL: i32 = 4;

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Read { .. } | CliError::Write { .. } => Self::CONFIG,
            CliError::Scenario { source, .. } => source.exit_code(),
            CliError::Model(e) => match e {
                ModelError::InvalidParameter(_) | ModelError::DegenerateTarget => Self::CONFIG,
                ModelError::Inadmissible { .. }
                | ModelError::Overlap { .. }
                | ModelError::InadmissibleAt { .. }
                | ModelError::Amplitude { .. } => Self::ADMISSIBILITY,
                ModelError::StokesletSingularity | ModelError::Singular { .. } | ModelError::PartialLoop { .. } => {
                    Self::NUMERICAL
                }
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

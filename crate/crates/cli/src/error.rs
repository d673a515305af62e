use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config field `{field}`: {reason}")]
    Config { field: String, reason: String },
    #[error("config: {0}")]
    ConfigSyntax(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("csv cell {0:?} is not a number")]
    BadCell(String),
    #[error(transparent)]
    Core(#[from] tcdyn_core::Error),
}

impl CliError {
    pub fn config(field: &str, reason: impl Into<String>) -> Self {
        CliError::Config { field: field.to_string(), reason: reason.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::ConfigSyntax(_) => 2,
            CliError::Core(tcdyn_core::Error::Resonance { .. } | tcdyn_core::Error::DegenerateFrequencies) => 3,
            CliError::Core(_) => 2,
            CliError::Io { .. } | CliError::Csv(_) | CliError::BadCell(_) => 4,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

//! CLI failure classes. Each class has a stable exit code so scripts can
//! distinguish a malformed config from a physically invalid one.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// TOML the parser could not read; message carries the line/column.
    #[error("config syntax error: {0}")]
    Syntax(String),
    /// Structurally valid TOML with a key the schema does not define.
    #[error("unknown config key: {0}")]
    UnknownKey(String),
    /// A value that is out of range, missing, or in the wrong unit.
    #[error("invalid config value: {0}")]
    UnitViolation(String),
    /// Reconstruction algorithm incompatible with the declared aperture.
    #[error("geometry mismatch: {0}")]
    GeometryMismatch(String),
    /// A config section required by the requested subcommand is absent.
    #[error("missing config section: {0}")]
    MissingSection(&'static str),
    /// Failure propagated from the simulation/reconstruction core.
    #[error("{0}")]
    Module(#[from] nfsar_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Syntax(_) => 2,
            CliError::UnknownKey(_) => 3,
            CliError::UnitViolation(_) => 4,
            CliError::GeometryMismatch(_) => 5,
            CliError::MissingSection(_) => 6,
            CliError::Module(_) => 7,
            CliError::Io(_) => 8,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

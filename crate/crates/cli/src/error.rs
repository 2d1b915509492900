use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("configuration has {} problem(s)", .0.len())]
    Invalid(Vec<crate::validate::Diagnostic>),
    #[error(transparent)]
    Core(#[from] unruh_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("output encoding failed: {0}")]
    Encode(String),
}

impl CliError {
    /// 1 invalid config, 2 impossible outcome, 3 truncation or precision,
    /// 4 I/O.
    pub fn exit_code(&self) -> i32 {
        use unruh_core::Error as E;
        match self {
            CliError::Config(_) | CliError::Invalid(_) => 1,
            CliError::Core(E::Configuration(_) | E::Domain(_)) => 1,
            CliError::Core(E::ZeroProbability { .. }) => 2,
            CliError::Core(E::Precision { .. } | E::Resource(_)) => 3,
            CliError::Io { .. } | CliError::Encode(_) => 4,
        }
    }
}

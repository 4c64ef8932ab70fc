use thiserror::Error;

/// Failures of the command-line layer. [`CliError::exit_code`] maps each to
/// the process exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("unknown scenario `{0}` (expected one of: stern-gerlach, cat, spin-one, two-slit)")]
    UnknownScenario(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] iopsim_core::Error),
}

impl CliError {
    /// 1 for usage and configuration problems, 2 for numerical failures.
    pub fn exit_code(&self) -> u8 {
        use iopsim_core::Error as E;
        match self {
            CliError::Core(E::BadParameter(_) | E::BadSlitGeometry(_) | E::DimensionTooLarge(_)) => 1,
            CliError::Core(_) => 2,
            _ => 1,
        }
    }
}

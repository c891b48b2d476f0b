use thiserror::Error;

/// Failures surfaced by the command-line front end, each with a stable exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, config values or config-file entries (exit 2).
    #[error("{0}")]
    Usage(String),

    /// Unreadable or unwritable files and malformed inputs (exit 3).
    #[error("{0}")]
    Io(String),

    /// An iterate or metric became non-finite (exit 4).
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    /// Attaches a path to an I/O-class error.
    pub fn with_path(self, path: &std::path::Path) -> Self {
        match self {
            CliError::Io(m) => CliError::Io(format!("{}: {m}", path.display())),
            other => other,
        }
    }
}

impl From<fbsplit_core::Error> for CliError {
    fn from(e: fbsplit_core::Error) -> Self {
        use fbsplit_core::Error as E;
        match e {
            E::DimensionMismatch { .. } | E::InvalidArgument(_) | E::Config(_) => {
                CliError::Usage(e.to_string())
            }
            E::Io(_) | E::Parse { .. } | E::UnsupportedFormat(_) => CliError::Io(e.to_string()),
            E::Numerical(_) | E::Divergence { .. } => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

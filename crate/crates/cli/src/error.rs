use thiserror::Error;

/// A command failure, classified by exit code: 2 for bad configuration or input, 1 for anything
/// that went wrong while running.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }

    pub fn config(message: impl Into<String>) -> Self {
        CliError::Config(message.into())
    }
}

impl From<ballmapper::Error> for CliError {
    fn from(e: ballmapper::Error) -> Self {
        use ballmapper::Error as E;
        match e {
            E::EmptyInput
            | E::InvalidBounds { .. }
            | E::InvalidEpsilon(_)
            | E::MissingColumn(_)
            | E::UnknownAggregator(_)
            | E::InvalidSpec(_)
            | E::TooFewPoints { .. }
            | E::Parse { .. }
            | E::Csv(_)
            | E::Json(_)
            | E::Io(_) => CliError::Config(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Reads a file, reporting the path on failure.
pub fn read_file(path: &std::path::Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))
}

/// Writes a file, reporting the path on failure.
pub fn write_file(path: &std::path::Path, contents: impl AsRef<[u8]>) -> CliResult<()> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Help or version text; not a failure.
    #[error("{0}")]
    Info(String),
    #[error("{0}")]
    Usage(String),
    #[error("invalid value {value:?} for `{key}`: expected {expected}")]
    Type {
        key: String,
        value: String,
        expected: &'static str,
    },
    #[error("missing required setting(s): {}", .0.join(", "))]
    Missing(Vec<String>),
    #[error("unknown setting `{0}`")]
    Unknown(String),
    #[error(transparent)]
    Runtime(#[from] interfield::Error),
    #[error("cannot write {}: {source}", .path.display())]
    Output {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Info(_) => 0,
            CliError::Usage(_) => 2,
            CliError::Type { .. } => 3,
            CliError::Missing(_) => 4,
            CliError::Runtime(interfield::Error::MissingSettings(_)) => 4,
            CliError::Unknown(_) => 5,
            CliError::Runtime(_) => 6,
            CliError::Output { .. } => 7,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

use thiserror::Error;

/// Exit codes of the command-line tool.
pub mod exit {
    /// Yes, no obstruction up to the bound, or a clean report.
    pub const OK: i32 = 0;
    /// A certified failure, or a witness that no longer replays.
    pub const NO: i32 = 1;
    /// Usage, parse or malformed-input error.
    pub const USAGE: i32 = 2;
    /// The engine could not decide.
    pub const ENGINE: i32 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Engine(#[from] lipsat_core::Error),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed config: {0}")]
    Config(#[from] toml::de::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use lipsat_core::Error as E;
        match self {
            CliError::Usage(_) | CliError::Malformed(_) | CliError::Json(_) | CliError::Config(_) => exit::USAGE,
            CliError::Engine(
                E::Parse { .. }
                | E::InvalidArgument(_)
                | E::UnknownVariable(_)
                | E::NotOnVariety
                | E::DegenerateInput(_)
                | E::NotAFamilyOverY(_)
                | E::NonIsolatedFiber(_),
            ) => exit::USAGE,
            CliError::Engine(_) | CliError::Csv(_) => exit::ENGINE,
            CliError::Io { .. } => exit::USAGE,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

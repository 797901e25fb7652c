//! Run settings: defaults, an optional TOML file, the environment, then flags.

use std::path::Path;

use clap::ValueEnum;
use lipsat_core::icurve::Limits;
use lipsat_core::verdict::SearchBound;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Overrides the truncation ceiling from the config file.
pub const CEILING_ENV: &str = "LIPSAT_TRUNC_CEILING";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

/// Keys accepted in a config file, e.g.
///
/// ```toml
/// exp = 6
/// ceiling = 1024
/// format = "json"
/// ```
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub exp: Option<u32>,
    pub root: Option<u32>,
    pub div: Option<u32>,
    pub trunc: Option<i64>,
    pub ceiling: Option<i64>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
}

impl FileConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok(toml::from_str(&text)?)
    }
}

/// Values given on the command line; `None` defers to the file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub exp: Option<u32>,
    pub root: Option<u32>,
    pub div: Option<u32>,
    pub trunc: Option<i64>,
    pub ceiling: Option<i64>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    exp: Option<u32>,
    root: Option<u32>,
    div: Option<u32>,
    pub limits: Limits,
    pub seed: u64,
    pub format: Format,
}

impl Settings {
    /// Flags beat the environment, which beats the file.
    pub fn resolve(file: &FileConfig, env_ceiling: Option<&str>, flags: &Overrides) -> CliResult<Settings> {
        let env = match env_ceiling {
            Some(s) => Some(
                s.trim()
                    .parse::<i64>()
                    .map_err(|_| CliError::Usage(format!("{} must be an integer, got {:?}", CEILING_ENV, s)))?,
            ),
            None => None,
        };
        let ceiling = flags.ceiling.or(env).or(file.ceiling).unwrap_or(Limits::DEFAULT_CEILING);
        let trunc = flags.trunc.or(file.trunc);
        let s = Settings {
            exp: flags.exp.or(file.exp),
            root: flags.root.or(file.root),
            div: flags.div.or(file.div),
            limits: Limits { trunc, ceiling },
            seed: flags.seed.or(file.seed).unwrap_or(0),
            format: flags.format.or(file.format).unwrap_or_default(),
        };
        for (name, v) in [("exp", s.exp), ("root", s.root), ("div", s.div)] {
            if v == Some(0) {
                return Err(CliError::Usage(format!("bound {} must be positive", name)));
            }
        }
        if ceiling < 1 || trunc.is_some_and(|t| t < 1) {
            return Err(CliError::Usage("truncation and ceiling must be positive".into()));
        }
        Ok(s)
    }

    /// Defaults for a curve of degree `deg`, with any configured overrides.
    pub fn bound(&self, deg: u32) -> SearchBound {
        let d = SearchBound::for_degree(deg);
        SearchBound {
            exp: self.exp.unwrap_or(d.exp),
            root: self.root.unwrap_or(d.root),
            div: self.div.unwrap_or(d.div),
        }
    }
}

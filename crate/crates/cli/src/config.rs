use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use weilcx_core::vey::WoCondition;

pub const CACHE_DIR_ENV: &str = "WEILCX_CACHE_DIR";
pub const DEFAULT_CONFIG_FILE: &str = "weilcx.toml";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Table,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub q_cap: u32,
    pub model_degree_cap: u32,
    pub vey_wo_condition: WoCondition,
    pub cache_dir: PathBuf,
    pub output_format: OutputFormat,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            q_cap: 6,
            model_degree_cap: 12,
            vey_wo_condition: WoCondition::ForallOdd,
            cache_dir: PathBuf::from(".weilcx-cache"),
            output_format: OutputFormat::Table,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid config file {path}: {source}")]
    Parse {
        path: PathBuf,
        source: toml::de::Error,
    },
    #[error("invalid config: {0}")]
    Invalid(String),
}

impl Config {
    /// Reads `explicit` if given, else `weilcx.toml` in the working directory
    /// when present, else the defaults. `WEILCX_CACHE_DIR` then overrides
    /// `cache_dir`.
    pub fn load(explicit: Option<&Path>) -> Result<Config, ConfigError> {
        let mut cfg = match explicit {
            Some(p) => Self::from_file(p)?,
            None if Path::new(DEFAULT_CONFIG_FILE).is_file() => {
                Self::from_file(Path::new(DEFAULT_CONFIG_FILE))?
            }
            None => Config::default(),
        };
        if let Some(dir) = std::env::var_os(CACHE_DIR_ENV).filter(|d| !d.is_empty()) {
            cfg.cache_dir = PathBuf::from(dir);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Config, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.into(),
            source,
        })?;
        Self::parse(&text).map_err(|source| ConfigError::Parse {
            path: path.into(),
            source,
        })
    }

    pub fn parse(text: &str) -> Result<Config, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.q_cap == 0 {
            return Err(ConfigError::Invalid("q_cap must be positive".into()));
        }
        if self.model_degree_cap == 0 {
            return Err(ConfigError::Invalid(
                "model_degree_cap must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Short SHA-256 digest of the settings that affect results.
    pub fn digest(&self) -> String {
        let text = format!(
            "q_cap={};model_degree_cap={};vey_wo_condition={}",
            self.q_cap, self.model_degree_cap, self.vey_wo_condition
        );
        let hash = Sha256::digest(text.as_bytes());
        hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

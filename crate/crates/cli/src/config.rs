//! `key = value` configuration file.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use aqa_core::retrieval::{DEFAULT_FETCH_CONCURRENCY, DEFAULT_MAX_RESULTS};

use crate::error::CliError;

/// Where search results come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Endpoint {
    Fixture(PathBuf),
    Live(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub search_endpoint: Option<Endpoint>,
    pub search_api_key_env: String,
    pub timeout_ms: u64,
    pub max_fetch_concurrency: usize,
    pub max_results: usize,
    pub data_dir: Option<PathBuf>,
    pub allow_hosts: Vec<String>,
    pub deny_hosts: Vec<String>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            search_endpoint: None,
            search_api_key_env: "AQA_SEARCH_API_KEY".into(),
            timeout_ms: 10_000,
            max_fetch_concurrency: DEFAULT_FETCH_CONCURRENCY,
            max_results: DEFAULT_MAX_RESULTS,
            data_dir: None,
            allow_hosts: Vec::new(),
            deny_hosts: Vec::new(),
        }
    }
}

fn positive<T: std::str::FromStr + PartialEq + From<u8>>(key: &str, value: &str) -> Result<T, String> {
    match value.parse::<T>() {
        Ok(n) if n != T::from(0) => Ok(n),
        _ => Err(format!("{key} must be a positive integer, got {value:?}")),
    }
}

fn host_list(value: &str) -> Vec<String> {
    value.split(',').map(str::trim).filter(|h| !h.is_empty()).map(str::to_string).collect()
}

impl Config {
    /// Parses config text. Relative paths resolve against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self, String> {
        let mut cfg = Config::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| format!("line {}: expected `key = value`", i + 1))?;
            let key = key.trim();
            let value = value.trim().trim_matches('"');
            let at = |e: String| format!("line {}: {e}", i + 1);
            match key {
                "search_endpoint" => {
                    cfg.search_endpoint = Some(match value.strip_prefix("fixture:") {
                        Some(p) => Endpoint::Fixture(base.join(p)),
                        None => {
                            url::Url::parse(value).map_err(|e| at(format!("search_endpoint: {e}")))?;
                            Endpoint::Live(value.to_string())
                        }
                    })
                }
                "search_api_key_env" => {
                    if value.is_empty() {
                        return Err(at("search_api_key_env must not be empty".into()));
                    }
                    cfg.search_api_key_env = value.to_string();
                }
                "timeout_ms" => cfg.timeout_ms = positive(key, value).map_err(at)?,
                "max_fetch_concurrency" => cfg.max_fetch_concurrency = positive(key, value).map_err(at)?,
                "max_results" => cfg.max_results = positive(key, value).map_err(at)?,
                "data_dir" => cfg.data_dir = Some(base.join(value)),
                "allow_hosts" => cfg.allow_hosts = host_list(value),
                "deny_hosts" => cfg.deny_hosts = host_list(value),
                other => return Err(at(format!("unknown key {other:?}"))),
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Config::parse(&text, base).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn timeout(&self) -> Duration {
        Duration::from_millis(self.timeout_ms)
    }

    /// Checks what must hold before any command runs.
    pub fn check(&self) -> Result<(), CliError> {
        if let Some(dir) = &self.data_dir {
            if !dir.is_dir() {
                return Err(CliError::Config(format!("data_dir {} does not exist", dir.display())));
            }
        }
        Ok(())
    }
}

//! `key = value` settings files.
//!
//! Keys are the long flag names (`max-sets` and `max_sets` are the same
//! key). `#` starts a comment.

use std::collections::BTreeMap;
use std::str::FromStr;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: duplicate key {key:?}")]
    Duplicate { line: usize, key: String },
    #[error("key {key:?}: cannot parse {value:?}")]
    Value { key: String, value: String },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

fn canonical(key: &str) -> String {
    key.trim().trim_start_matches("--").replace('_', "-")
}

impl Settings {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or(ConfigError::Syntax { line: i + 1 })?;
            let key = canonical(k);
            if key.is_empty() {
                return Err(ConfigError::Syntax { line: i + 1 });
            }
            if values.insert(key.clone(), v.trim().to_string()).is_some() {
                return Err(ConfigError::Duplicate { line: i + 1, key });
            }
        }
        Ok(Settings { values })
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError> {
        let key = canonical(key);
        match self.values.get(&key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|_| ConfigError::Value { key, value: v.clone() }),
        }
    }

    /// `flag` if given on the command line, otherwise the file value.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, ConfigError> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }
}

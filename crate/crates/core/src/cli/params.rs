use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Flat `key = value` settings. Later sources override earlier ones, so
/// file values go in first and flags after.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params {
    values: BTreeMap<String, String>,
}

impl Params {
    /// Parses `key = value` lines. `#` starts a comment; blank lines are
    /// skipped; dashes in keys are read as underscores.
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(Error::data(i + 1, format!("expected key = value, got '{line}'")));
            };
            let key = normalise(k);
            if key.is_empty() {
                return Err(Error::data(i + 1, "empty key"));
            }
            values.insert(key, v.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.values.insert(normalise(key), value.to_string());
    }

    /// Sets `key` only when a flag supplied a value.
    pub fn set_opt<T: ToString>(&mut self, key: &str, value: Option<T>) {
        if let Some(v) = value {
            self.set(key, v);
        }
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.values
            .get(key)
            .map(|v| {
                v.parse()
                    .map_err(|e| Error::input(format!("bad value '{v}' for {key}: {e}")))
            })
            .transpose()
    }

    /// Comma-separated list.
    pub fn get_list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: std::fmt::Display,
    {
        self.values
            .get(key)
            .map(|v| {
                v.split(',')
                    .map(|x| {
                        x.trim()
                            .parse()
                            .map_err(|e| Error::input(format!("bad entry '{x}' in {key}: {e}")))
                    })
                    .collect()
            })
            .transpose()
    }

    /// Rejects keys outside `known`, which catches typos in config files.
    pub fn check_keys(&self, known: &[&str]) -> Result<()> {
        match self.values.keys().find(|k| !known.contains(&k.as_str())) {
            Some(k) => Err(Error::input(format!(
                "unknown setting '{k}' (expected one of: {})",
                known.join(", ")
            ))),
            None => Ok(()),
        }
    }
}

fn normalise(key: &str) -> String {
    key.trim().replace('-', "_")
}

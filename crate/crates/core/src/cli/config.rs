//! `key=value` configuration files. Keys are the long flag names without
//! the leading dashes; `#` starts a comment.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use super::CliError;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("--config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Usage(format!(
                    "config line {}: expected key=value, got '{}'",
                    no + 1,
                    raw.trim()
                )));
            };
            let key = key.trim().trim_start_matches("--").replace('_', "-");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!("config line {}: unknown key '{key}'", no + 1)));
            }
            entries.insert(key, value.trim().to_string());
        }
        Ok(Self { entries })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }
}

pub(crate) const KNOWN_KEYS: &[&str] = &[
    "users",
    "subcarriers",
    "group-size",
    "epsilon",
    "gap",
    "ber",
    "l-param",
    "slots",
    "snr-db",
    "alpha",
    "seed",
    "algo",
    "power",
    "max-it",
    "fairness-memory",
];

/// Flag value if present, else the file value parsed as `T`.
pub(crate) fn pick<T: FromStr>(flag: Option<T>, file: &ConfigFile, key: &str) -> Result<Option<T>, CliError> {
    if flag.is_some() {
        return Ok(flag);
    }
    file.get(key)
        .map(|v| {
            v.parse::<T>()
                .map_err(|_| CliError::Usage(format!("--{key}: cannot parse '{v}'")))
        })
        .transpose()
}

/// Comma-separated list variant of [`pick`].
pub(crate) fn pick_list<T: FromStr>(
    flag: Option<Vec<T>>,
    file: &ConfigFile,
    key: &str,
) -> Result<Option<Vec<T>>, CliError> {
    if flag.is_some() {
        return Ok(flag);
    }
    file.get(key).map(|v| parse_list(v, key)).transpose()
}

pub(crate) fn parse_list<T: FromStr>(text: &str, key: &str) -> Result<Vec<T>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<T>()
                .map_err(|_| CliError::Usage(format!("--{key}: cannot parse '{s}'")))
        })
        .collect()
}

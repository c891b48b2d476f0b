//! Plain `key = value` text files, used for experiment configs and for the
//! metadata sidecars written next to degraded images.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::error::{CliError, CliResult};

/// Parsed entries with their 1-based line numbers. Keys are normalized so
/// that `noise_sigma` and `noise-sigma` are the same key.
#[derive(Debug, Clone, Default)]
pub struct KvFile {
    origin: String,
    entries: BTreeMap<String, (String, usize)>,
}

fn normalize(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('_', "-")
}

impl KvFile {
    /// Blank lines and lines starting with `#` are ignored.
    pub fn parse(text: &str, origin: &str) -> CliResult<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(CliError::usage(format!(
                    "{origin}:{}: expected `key = value`, got `{line}`",
                    i + 1
                )));
            };
            let key = normalize(k);
            if key.is_empty() {
                return Err(CliError::usage(format!("{origin}:{}: empty key", i + 1)));
            }
            if entries
                .insert(key.clone(), (v.trim().to_string(), i + 1))
                .is_some()
            {
                return Err(CliError::usage(format!(
                    "{origin}:{}: duplicate key `{key}`",
                    i + 1
                )));
            }
        }
        Ok(Self {
            origin: origin.to_string(),
            entries,
        })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::from(e).with_path(path))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Loads `path` if given, otherwise yields an empty file.
    pub fn load_optional(path: Option<&Path>) -> CliResult<Self> {
        path.map_or_else(|| Ok(Self::default()), Self::load)
    }

    /// Removes and parses `key`.
    pub fn take<T>(&mut self, key: &str) -> CliResult<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        let Some((raw, line)) = self.entries.remove(&normalize(key)) else {
            return Ok(None);
        };
        raw.parse::<T>()
            .map(Some)
            .map_err(|e| CliError::usage(format!("{}:{line}: invalid `{key}`: {e}", self.origin)))
    }

    /// A command-line value wins over the file; the file entry is consumed
    /// either way so that [`KvFile::finish`] does not flag it.
    pub fn pick<T>(&mut self, flag: Option<T>, key: &str) -> CliResult<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        let from_file = self.take(key)?;
        Ok(flag.or(from_file))
    }

    /// Like [`KvFile::pick`] for comma-separated lists.
    pub fn pick_list<T>(&mut self, flag: Option<Vec<T>>, key: &str) -> CliResult<Option<Vec<T>>>
    where
        T: FromStr,
        T::Err: Display,
    {
        let from_file = match self.take::<String>(key)? {
            None => None,
            Some(raw) => Some(
                raw.split(',')
                    .map(|s| {
                        s.trim().parse::<T>().map_err(|e| {
                            CliError::usage(format!(
                                "{}: invalid `{key}` item `{s}`: {e}",
                                self.origin
                            ))
                        })
                    })
                    .collect::<CliResult<Vec<T>>>()?,
            ),
        };
        Ok(flag.or(from_file))
    }

    /// Fails on any entry nobody asked for, which catches misspelled keys.
    pub fn finish(self) -> CliResult<()> {
        match self.entries.into_iter().next() {
            None => Ok(()),
            Some((key, (_, line))) => Err(CliError::usage(format!(
                "{}:{line}: unknown key `{key}`",
                self.origin
            ))),
        }
    }
}

/// Renders entries in the order given.
pub fn render_kv(pairs: &[(&str, String)]) -> String {
    pairs.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
}

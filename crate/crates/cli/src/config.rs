//! `key=value` config files and flag > file > environment > default resolution.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

pub const SEED_ENV: &str = "DFSQFT_SEED";

pub const KEYS: &[&str] = &[
    "encoding",
    "n",
    "model",
    "n_max",
    "out",
    "seed",
    "trials",
    "policy",
    "format",
    "distribution",
    "sigma",
    "input",
];

#[derive(Debug, Default)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("config line {}: expected key=value", i + 1))
            })?;
            let (k, v) = (k.trim(), v.trim());
            if !KEYS.contains(&k) {
                return Err(CliError::Usage(format!(
                    "config line {}: unknown key {k:?}",
                    i + 1
                )));
            }
            values.insert(k.to_string(), v.to_string());
        }
        Ok(ConfigFile { values })
    }

    /// The flag if given, else the file value parsed as `T`.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        self.values
            .get(key)
            .map(|v| {
                v.parse()
                    .map_err(|e| CliError::Usage(format!("config key {key}: {e}")))
            })
            .transpose()
    }

    pub fn require<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.pick(flag, key)?
            .ok_or_else(|| CliError::Usage(format!("missing required value: {key}")))
    }

    /// Seed from the flag, the file, then `DFSQFT_SEED`, then 0.
    pub fn seed(&self, flag: Option<u64>) -> Result<u64, CliError> {
        if let Some(s) = self.pick(flag, "seed")? {
            return Ok(s);
        }
        match std::env::var(SEED_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|e| CliError::Usage(format!("{SEED_ENV}: {e}"))),
            Err(_) => Ok(0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_pick() {
        let c = ConfigFile::parse("# comment\n\nn = 3\nencoding=wcd\n").unwrap();
        assert_eq!(c.pick::<usize>(None, "n").unwrap(), Some(3));
        assert_eq!(c.pick(Some(5usize), "n").unwrap(), Some(5));
        assert_eq!(c.require::<String>(None, "encoding").unwrap(), "wcd");
        assert!(c.require::<usize>(None, "trials").is_err());
    }

    #[test]
    fn rejects_unknown_and_malformed() {
        assert!(ConfigFile::parse("colour=blue").is_err());
        assert!(ConfigFile::parse("n 3").is_err());
        let c = ConfigFile::parse("n=three").unwrap();
        assert!(c.pick::<usize>(None, "n").is_err());
    }
}

//! Flat `key = value` run configuration.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

/// Parameters after merging the config file and `--set` overrides.
#[derive(Debug, Clone, Default)]
pub struct Params {
    values: BTreeMap<String, String>,
}

impl Params {
    /// Lines are `key = value`; blank lines and lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Self, UsageError> {
        let mut params = Self::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            params
                .set_pair(line)
                .map_err(|e| usage(format!("line {}: {}", n + 1, e.0)))?;
        }
        Ok(params)
    }

    pub fn load(path: &Path) -> Result<Self, UsageError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Applies one `key=value` override.
    pub fn set_pair(&mut self, pair: &str) -> Result<(), UsageError> {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| usage(format!("expected key=value, got '{pair}'")))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(usage(format!("empty key in '{pair}'")));
        }
        self.values.insert(key.to_string(), value.trim().to_string());
        Ok(())
    }

    /// Rejects keys outside `allowed`.
    pub fn check_keys(&self, command: &str, allowed: &[&str]) -> Result<(), UsageError> {
        for key in self.values.keys() {
            if !allowed.contains(&key.as_str()) {
                let mut known = allowed.to_vec();
                known.sort_unstable();
                return Err(usage(format!(
                    "unknown key '{key}' for {command} (known: {})",
                    known.join(", ")
                )));
            }
        }
        Ok(())
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64, UsageError> {
        match self.values.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| usage(format!("{key} = '{v}' is not a finite number"))),
        }
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize, UsageError> {
        match self.values.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<usize>()
                .map_err(|_| usage(format!("{key} = '{v}' is not a non-negative integer"))),
        }
    }

    pub fn choice_or<'a>(
        &'a self,
        key: &str,
        default: &'a str,
        choices: &[&str],
    ) -> Result<&'a str, UsageError> {
        let v = self.values.get(key).map_or(default, String::as_str);
        if choices.contains(&v) {
            Ok(v)
        } else {
            Err(usage(format!("{key} = '{v}' must be one of {}", choices.join("|"))))
        }
    }
}

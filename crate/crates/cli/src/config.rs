//! `key = value` config files and flag overrides.
//!
//! Blank lines and lines starting with `#` are skipped. Keys are checked
//! against the set the running command understands, so a typo is reported
//! instead of silently falling back to a default.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use crate::error::{CliError, Result};

pub fn parse(text: &str, origin: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Config(format!("{origin}:{}: expected `key = value`", lineno + 1)));
        };
        let key = key.trim();
        if key.is_empty() {
            return Err(CliError::Config(format!("{origin}:{}: empty key", lineno + 1)));
        }
        if out.insert(key.to_string(), value.trim().to_string()).is_some() {
            return Err(CliError::Config(format!("{origin}:{}: duplicate key `{key}`", lineno + 1)));
        }
    }
    Ok(out)
}

/// Resolved settings for one command: flag, then file, then default. Every
/// lookup is echoed in order for output headers.
#[derive(Debug, Default)]
pub struct Settings {
    file: BTreeMap<String, String>,
    echo: Vec<(String, String)>,
}

impl Settings {
    pub fn load(path: Option<&Path>, allowed: &[&str]) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        let file = parse(&text, &path.display().to_string())?;
        if let Some(unknown) = file.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(CliError::Config(format!(
                "unknown key `{unknown}` in {} (expected one of: {})",
                path.display(),
                allowed.join(", ")
            )));
        }
        Ok(Self { file, echo: Vec::new() })
    }

    pub fn get<T>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        let value = match (flag, self.file.get(key)) {
            (Some(v), _) => v,
            (None, Some(raw)) => raw
                .parse()
                .map_err(|e| CliError::Config(format!("bad value `{raw}` for `{key}`: {e}")))?,
            (None, None) => default,
        };
        self.echo.push((key.to_string(), value.to_string()));
        Ok(value)
    }

    /// Optional text setting; echoed only when present.
    pub fn optional(&mut self, key: &str, flag: Option<String>) -> Option<String> {
        let value = flag.or_else(|| self.file.get(key).cloned()).filter(|v| !v.is_empty())?;
        self.echo.push((key.to_string(), value.clone()));
        Some(value)
    }

    /// Boolean switch: a set flag wins, otherwise the file value, otherwise off.
    pub fn switch(&mut self, key: &str, flag: bool) -> Result<bool> {
        self.get(key, flag.then_some(true), false)
    }

    pub fn echo(&self) -> &[(String, String)] {
        &self.echo
    }
}

/// `count` evenly spaced values from `min` to `max`; a single point sits at `min`.
pub fn linspace(min: f64, max: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![min];
    }
    (0..count).map(|i| min + (max - min) * i as f64 / (count - 1) as f64).collect()
}

pub fn check_range(name: &str, min: f64, max: f64, count: usize) -> Result<()> {
    if count == 0 {
        return Err(CliError::Config(format!("{name}_count must be at least 1")));
    }
    if !min.is_finite() || !max.is_finite() || min > max {
        return Err(CliError::Config(format!("{name} range [{min}, {max}] is invalid")));
    }
    Ok(())
}

pub const MIN_STEPS: usize = 1000;

pub fn check_steps(steps: usize) -> Result<()> {
    if steps < MIN_STEPS {
        return Err(CliError::Config(format!("steps must be at least {MIN_STEPS}, got {steps}")));
    }
    Ok(())
}

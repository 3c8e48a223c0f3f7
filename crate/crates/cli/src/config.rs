use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use sharpckn::quad::QuadratureSpec;

/// Keys accepted in a config file. Flags use the same names with `-`.
pub const KNOWN_KEYS: &[&str] = &[
    "n", "alpha", "beta", "gamma", "t", "profile", "battery", "k", "kmax", "tol", "abs_tol", "rel_tol", "seed",
    "out", "format", "dmax", "imax", "samples", "evals", "basis",
];

/// Settings merged from a config file and the command line. Command-line
/// values replace file values key by key.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    values: BTreeMap<String, Vec<String>>,
}

impl RunConfig {
    /// Parses flat `key = value` text. `#` starts a comment; a key may repeat
    /// (each `profile` line adds one profile).
    pub fn parse_file_text(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("config line {}: expected key = value", lineno + 1))?;
            let key = normalize(key);
            if !KNOWN_KEYS.contains(&key.as_str()) {
                bail!("config line {}: unknown key '{key}'", lineno + 1);
            }
            cfg.values.entry(key).or_default().push(value.trim().to_string());
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::parse_file_text(&text).with_context(|| format!("in config {}", path.display()))
    }

    /// Replaces every value of `key`.
    pub fn set(&mut self, key: &str, values: Vec<String>) {
        if !values.is_empty() {
            self.values.insert(normalize(key), values);
        }
    }

    pub fn set_opt<T: ToString>(&mut self, key: &str, value: Option<T>) {
        if let Some(v) = value {
            self.set(key, vec![v.to_string()]);
        }
    }

    pub fn list(&self, key: &str) -> &[String] {
        self.values.get(key).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).and_then(|v| v.last()).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.raw(key) {
            None => Ok(None),
            Some(s) => s
                .parse()
                .map(Some)
                .map_err(|e| anyhow!("invalid value '{s}' for {key}: {e}")),
        }
    }

    pub fn require<T: FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)?.ok_or_else(|| anyhow!("missing required setting --{}", key.replace('_', "-")))
    }

    pub fn or<T: FromStr>(&self, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.get(key)?.unwrap_or(default))
    }

    pub fn quadrature(&self) -> Result<QuadratureSpec> {
        let mut spec = QuadratureSpec::default();
        if let Some(a) = self.get("abs_tol")? {
            spec.abs_tol = a;
        }
        if let Some(r) = self.get("rel_tol")? {
            spec.rel_tol = r;
        }
        spec.validate()?;
        Ok(spec)
    }
}

fn normalize(key: &str) -> String {
    key.trim().replace('-', "_")
}

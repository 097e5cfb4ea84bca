//! Run configuration: defaults, then a `key = value` file, then flags.

use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Tsv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "tsv" => Ok(Format::Tsv),
            other => Err(format!("unknown format {other:?}; use json or tsv")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub max_len: usize,
    pub max_steps: u64,
    pub max_output_bits: usize,
    pub seed: u64,
    pub format: Option<Format>,
    pub universe_len: usize,
    pub jobs: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { max_len: 16, max_steps: 4096, max_output_bits: 4096, seed: 0, format: None, universe_len: 4, jobs: None }
    }
}

fn positive<T: std::str::FromStr + PartialEq + Default>(key: &str, v: &str) -> Result<T, String> {
    let n: T = v.parse().map_err(|_| format!("{key}: {v:?} is not a number"))?;
    if n == T::default() {
        return Err(format!("{key} must be positive"));
    }
    Ok(n)
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "max_len" => self.max_len = value.parse().map_err(|_| format!("max_len: {value:?} is not a number"))?,
            "max_steps" => self.max_steps = positive(key, value)?,
            "max_output_bits" => self.max_output_bits = positive(key, value)?,
            "seed" => self.seed = value.parse().map_err(|_| format!("seed: {value:?} is not a number"))?,
            "format" => self.format = Some(value.parse()?),
            "universe_len" => self.universe_len = value.parse().map_err(|_| format!("universe_len: {value:?} is not a number"))?,
            "jobs" => self.jobs = Some(positive(key, value)?),
            other => return Err(format!("unknown configuration key {other:?}")),
        }
        Ok(())
    }

    /// `key = value` lines; `#` starts a comment, values may be quoted.
    pub fn apply_text(&mut self, text: &str) -> Result<(), String> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| format!("line {}: expected key = value", n + 1))?;
            let v = v.trim().trim_matches('"');
            self.set(k.trim(), v).map_err(|e| format!("line {}: {e}", n + 1))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        self.apply_text(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

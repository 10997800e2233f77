//! The report envelope shared by every command, and atomic output.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::Context;
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
}

impl Outcome {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NumericReport {
    pub command: String,
    pub inputs: Value,
    pub seed: u64,
    pub outcome: Outcome,
    pub details: Value,
    pub max_deviation: Option<f64>,
    pub runtime_ms: u64,
    pub tool_version: String,
}

/// What a command hands back before the envelope is filled in.
pub struct CommandResult {
    pub outcome: Outcome,
    pub details: Value,
    pub max_deviation: Option<f64>,
}

impl CommandResult {
    pub fn new(ok: bool, details: Value) -> Self {
        Self {
            outcome: Outcome::from_bool(ok),
            details,
            max_deviation: None,
        }
    }

    pub fn with_deviation(mut self, d: f64) -> Self {
        self.max_deviation = Some(d);
        self
    }
}

/// Writes `text` next to `path` and renames it into place.
pub fn write_atomic(path: &Path, text: &str) -> anyhow::Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let name = path.file_name().context("output path has no file name")?;
    let tmp = dir.join(format!(
        ".{}.tmp{}",
        name.to_string_lossy(),
        std::process::id()
    ));
    {
        let mut f =
            fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
        f.write_all(text.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

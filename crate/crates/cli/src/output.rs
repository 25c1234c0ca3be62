//! Error mapping, CSV helpers and the run manifest.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

pub const MANIFEST_NAME: &str = "run_manifest.json";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] parisian_core::Error),
    #[error("{0}")]
    Output(String),
    /// Monte Carlo declined because the event is too rare for the budget.
    #[error("{0}")]
    Refused(String),
    #[error("acceptance criteria failed: {0:?}")]
    Validation(Vec<u8>),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Validation(_) => 1,
            CliError::Core(_) | CliError::Output(_) | CliError::Refused(_) => 3,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `lo:hi:step` into the inclusive grid lo, lo+step, …, hi.
pub fn parse_range(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}")))
        .collect::<Result<_, _>>()?;
    let [lo, hi, step] = parts[..] else {
        return Err(format!("expected lo:hi:step, got {s:?}"));
    };
    if !(step > 0.0) || hi < lo {
        return Err(format!("need step > 0 and hi >= lo in {s:?}"));
    }
    let k = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=k).map(|i| lo + i as f64 * step).collect())
}

pub fn write_csv<R: Serialize>(path: &Path, rows: &[R]) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Collects what a command wrote and appends one entry to the manifest in
/// each directory that received an output.
pub struct Manifest {
    command: String,
    params: Value,
    seed: u64,
    started: Instant,
    started_at: String,
    outputs: Vec<PathBuf>,
}

impl Manifest {
    pub fn new(command: &str, params: Value, seed: u64) -> Self {
        Manifest {
            command: command.into(),
            params,
            seed,
            started: Instant::now(),
            started_at: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            outputs: Vec::new(),
        }
    }

    pub fn output(&mut self, path: &Path) {
        self.outputs.push(path.to_path_buf());
    }

    pub fn finish(self) -> CliResult<()> {
        let mut dirs: Vec<PathBuf> = self
            .outputs
            .iter()
            .map(|p| p.parent().map(Path::to_path_buf).unwrap_or_default())
            .collect();
        dirs.sort();
        dirs.dedup();
        let entry = json!({
            "command": self.command,
            "params": self.params,
            "seed": self.seed,
            "version": parisian_core::registry::TOOL_VERSION,
            "started_at": self.started_at,
            "wall_time_secs": self.started.elapsed().as_secs_f64(),
            "outputs": self.outputs,
        });
        for dir in dirs {
            let path = if dir.as_os_str().is_empty() { PathBuf::from(MANIFEST_NAME) } else { dir.join(MANIFEST_NAME) };
            let mut doc = match fs::read_to_string(&path) {
                Ok(text) => serde_json::from_str::<Value>(&text)
                    .map_err(|e| CliError::Output(format!("{}: not a manifest: {e}", path.display())))?,
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => json!({ "runs": [] }),
                Err(e) => return Err(e.into()),
            };
            match doc.get_mut("runs").and_then(Value::as_array_mut) {
                Some(runs) => runs.push(entry.clone()),
                None => return Err(CliError::Output(format!("{}: missing runs array", path.display()))),
            }
            fs::write(&path, serde_json::to_string_pretty(&doc).expect("json") + "\n")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("0:2:0.25").unwrap().len(), 9);
        assert_eq!(parse_range("1:1:0.5").unwrap(), vec![1.0]);
        assert!(parse_range("0:1").is_err());
        assert!(parse_range("1:0:0.1").is_err());
        assert!(parse_range("0:1:0").is_err());
    }
}

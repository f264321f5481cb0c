//! Run manifests: the resolved configuration echoed into every CSV header and
//! a timestamped sidecar file listing the produced artifacts.
//!
//! The timestamp deliberately stays out of the CSV comments so that repeated
//! runs with identical settings produce byte-identical CSV files.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone)]
pub struct RunManifest {
    pub command: String,
    pub settings: Vec<(String, String)>,
    pub outputs: Vec<PathBuf>,
    pub timestamp_unix: u64,
}

impl RunManifest {
    pub fn new(command: &str, settings: Vec<(String, String)>) -> Self {
        let timestamp_unix = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        RunManifest {
            command: command.to_string(),
            settings,
            outputs: Vec::new(),
            timestamp_unix,
        }
    }

    pub fn record_output(&mut self, path: &Path) {
        self.outputs.push(path.to_path_buf());
    }

    /// Comment lines embedded in the CSV (deterministic: no timestamp).
    pub fn csv_comments(&self) -> Vec<String> {
        let mut lines = vec![
            format!("command: {}", self.command),
            format!("version: {VERSION}"),
        ];
        for (k, v) in &self.settings {
            lines.push(format!("{k}: {v}"));
        }
        lines
    }

    /// Write the timestamped sidecar manifest next to the data files.
    pub fn write_sidecar(&self, path: &Path) -> std::io::Result<()> {
        let mut f = std::fs::File::create(path)?;
        writeln!(f, "command: {}", self.command)?;
        writeln!(f, "version: {VERSION}")?;
        writeln!(f, "timestamp_unix: {}", self.timestamp_unix)?;
        for (k, v) in &self.settings {
            writeln!(f, "{k}: {v}")?;
        }
        for out in &self.outputs {
            writeln!(f, "output: {}", out.display())?;
        }
        Ok(())
    }
}

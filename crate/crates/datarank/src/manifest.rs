//! Machine-readable record written beside every command output.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub input_paths: Vec<String>,
    /// Resolved values after merging defaults, config file and flags.
    pub parameter_values: BTreeMap<String, Value>,
    pub output_paths: Vec<String>,
    pub tool_version: String,
    pub wall_time_seconds: f64,
    /// SHA-256 of the graph snapshot read or written, if any.
    pub graph_fingerprint: Option<String>,
    /// Command-specific outcomes (convergence, counts, best cell).
    pub results: BTreeMap<String, Value>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_owned(),
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
            ..Self::default()
        }
    }

    pub fn input(&mut self, path: &Path) {
        self.input_paths.push(path.display().to_string());
    }

    pub fn output(&mut self, path: &Path) {
        self.output_paths.push(path.display().to_string());
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) {
        self.parameter_values.insert(key.to_owned(), value.into());
    }

    pub fn result(&mut self, key: &str, value: impl Into<Value>) {
        self.results.insert(key.to_owned(), value.into());
    }

    pub fn write(&self, path: &Path) -> io::Result<()> {
        let mut text = serde_json::to_string_pretty(self).map_err(io::Error::other)?;
        text.push('\n');
        fs::write(path, text)
    }
}

/// `<output>.manifest.json`.
pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    output.with_file_name(name)
}

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Duration;

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Default, Serialize)]
pub struct RunCounts {
    pub traces: usize,
    pub events: usize,
    pub candidates: usize,
    pub results: usize,
}

/// Run metadata kept apart from result files so those stay diffable.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: &'static str,
    /// File name to SHA-256 of its bytes.
    pub inputs: BTreeMap<String, String>,
    pub config: BTreeMap<&'static str, String>,
    pub counts: RunCounts,
    pub duration_ms: f64,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl RunReport {
    pub fn new(command: &'static str) -> Self {
        RunReport {
            command,
            inputs: BTreeMap::new(),
            config: BTreeMap::new(),
            counts: RunCounts::default(),
            duration_ms: 0.0,
        }
    }

    pub fn input(&mut self, path: &Path, bytes: &[u8]) {
        self.inputs
            .insert(path.display().to_string(), sha256_hex(bytes));
    }

    pub fn finish(&mut self, elapsed: Duration) {
        self.duration_ms = elapsed.as_secs_f64() * 1e3;
    }

    pub fn write(&self, path: &Path) -> anyhow::Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text + "\n")?;
        Ok(())
    }
}

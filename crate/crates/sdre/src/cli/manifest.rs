//! Run manifests: what was run, with which seeds, and what it produced.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::Path;

pub const MANIFEST_NAME: &str = "manifest.json";

/// Checksum and schema of one output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileEntry {
    pub sha256: String,
    pub schema: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Command arguments other than the output location.
    pub args: BTreeMap<String, String>,
    /// Effective configuration after defaults and overrides.
    pub config: serde_json::Value,
    pub seeds: BTreeMap<String, u64>,
    pub files: BTreeMap<String, FileEntry>,
    pub wall_seconds: f64,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            args: BTreeMap::new(),
            config: serde_json::Value::Null,
            seeds: BTreeMap::new(),
            files: BTreeMap::new(),
            wall_seconds: 0.0,
        }
    }

    /// Record the checksum of a file inside `dir`.
    pub fn add_file(&mut self, dir: &Path, name: &str, schema: &str) -> Result<()> {
        let bytes = std::fs::read(dir.join(name))?;
        let sha256 = hex::encode(Sha256::digest(&bytes));
        self.files.insert(name.to_string(), FileEntry { sha256, schema: schema.to_string() });
        Ok(())
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).map_err(|e| Error::Data(e.to_string()))?;
        std::fs::write(dir.join(MANIFEST_NAME), text + "\n")?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("manifest {}: {e}", path.display())))
    }

    /// Files whose current content no longer matches the recorded checksum.
    pub fn changed_files(&self, dir: &Path) -> Vec<String> {
        self.files
            .iter()
            .filter(|(name, e)| {
                std::fs::read(dir.join(name)).map(|b| hex::encode(Sha256::digest(&b)) != e.sha256).unwrap_or(true)
            })
            .map(|(n, _)| n.clone())
            .collect()
    }
}

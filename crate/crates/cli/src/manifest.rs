use std::fs;
use std::path::Path;

use chrono::{SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use clusterwise::{Error, Result};

pub const MANIFEST_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

impl FileDigest {
    pub fn of(path: &Path) -> Result<Self> {
        let bytes = fs::read(path)?;
        Ok(Self { path: path.display().to_string(), sha256: sha256_hex(&bytes) })
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Provenance of one command invocation. Two manifests that agree on
/// everything but the timestamps describe identical outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub command: String,
    pub tool_version: String,
    pub config: serde_json::Value,
    pub master_seed: Option<u64>,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub started_at: String,
    pub finished_at: String,
}

pub fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

impl RunManifest {
    pub fn start(command: &str, config: serde_json::Value, master_seed: Option<u64>) -> Self {
        Self {
            schema_version: MANIFEST_SCHEMA_VERSION,
            command: command.to_owned(),
            tool_version: clusterwise::VERSION.to_owned(),
            config,
            master_seed,
            inputs: Vec::new(),
            outputs: Vec::new(),
            started_at: now(),
            finished_at: String::new(),
        }
    }

    pub fn input(&mut self, path: &Path) -> Result<()> {
        self.inputs.push(FileDigest::of(path)?);
        Ok(())
    }

    pub fn output(&mut self, path: &Path) -> Result<()> {
        self.outputs.push(FileDigest::of(path)?);
        Ok(())
    }

    pub fn finish(mut self) -> Self {
        self.finished_at = now();
        self
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).map_err(|e| Error::InvalidInput(e.to_string()))?;
        fs::write(path, text + "\n")?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_digest() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}

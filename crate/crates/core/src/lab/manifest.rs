use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::LabError;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn unix_now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestFile {
    /// Relative to the manifest's directory.
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

/// Reproducibility record written next to every set of artifacts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config_digest: String,
    pub tool_version: String,
    pub started_unix: f64,
    pub finished_unix: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution_delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refine_depth: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evaluator_tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mesh: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_star: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_star_heuristic: Option<bool>,
    pub files: Vec<ManifestFile>,
    pub notes: Vec<String>,
}

impl RunManifest {
    pub fn new(command: impl Into<String>, config_digest: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            config_digest: config_digest.into(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            started_unix: unix_now(),
            finished_unix: 0.0,
            resolution_delta: None,
            refine_depth: None,
            evaluator_tolerance: None,
            mesh: None,
            sigma_star: None,
            sigma_star_heuristic: None,
            files: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// Writes `files` into `dir`, then the manifest itself as
    /// `manifest_name`. Returns the manifest path.
    pub fn write_all(&mut self, dir: &Path, manifest_name: &str, files: &[(String, String)]) -> Result<PathBuf, LabError> {
        std::fs::create_dir_all(dir)
            .map_err(|e| LabError::input(format!("{}: {e}", dir.display())))?;
        for (name, contents) in files {
            let path = dir.join(name);
            std::fs::write(&path, contents).map_err(|e| LabError::input(format!("{}: {e}", path.display())))?;
            self.files.retain(|f| &f.path != name);
            self.files.push(ManifestFile {
                path: name.clone(),
                sha256: sha256_hex(contents.as_bytes()),
                bytes: contents.len() as u64,
            });
        }
        self.finished_unix = unix_now();
        let path = dir.join(manifest_name);
        let json = serde_json::to_string_pretty(self).expect("manifest serializes") + "\n";
        std::fs::write(&path, json).map_err(|e| LabError::input(format!("{}: {e}", path.display())))?;
        Ok(path)
    }

    pub fn load(path: &Path) -> Result<Self, LabError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LabError::input(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| LabError::input(format!("{}: {e}", path.display())))
    }

    /// Re-hashes every listed file relative to `dir`.
    pub fn verify(&self, dir: &Path) -> Result<(), LabError> {
        for f in &self.files {
            let path = dir.join(&f.path);
            let bytes = std::fs::read(&path).map_err(|e| LabError::input(format!("{}: {e}", path.display())))?;
            if sha256_hex(&bytes) != f.sha256 {
                return Err(LabError::input(format!("{} does not match its manifest digest", path.display())));
            }
        }
        Ok(())
    }
}

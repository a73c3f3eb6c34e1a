use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::io::io_err;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    /// Path relative to the output directory.
    pub path: String,
    pub sha256: String,
}

/// Written as `manifest-<command>.json` next to the artifacts of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    /// SHA-256 of the command, its arguments and the seed. Thread count and
    /// output directory are excluded so reruns elsewhere hash the same.
    pub config_hash: String,
    pub config: serde_json::Value,
    pub artifacts: Vec<ManifestEntry>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Collects artifacts written under one output directory.
pub struct Output {
    pub dir: PathBuf,
    written: Vec<(String, String)>,
}

impl Output {
    pub fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn path(&self, name: &Path) -> PathBuf {
        self.dir.join(name)
    }

    pub fn bytes(&mut self, name: impl AsRef<Path>, data: &[u8]) -> Result<PathBuf> {
        let path = self.path(name.as_ref());
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| io_err(parent, e))?;
        }
        fs::write(&path, data).map_err(|e| io_err(&path, e))?;
        let rel = path
            .strip_prefix(&self.dir)
            .unwrap_or(&path)
            .to_string_lossy()
            .replace('\\', "/");
        self.written.retain(|(p, _)| *p != rel);
        self.written.push((rel, sha256_hex(data)));
        Ok(path)
    }

    pub fn text(&mut self, name: impl AsRef<Path>, s: &str) -> Result<PathBuf> {
        self.bytes(name, s.as_bytes())
    }

    pub fn json<T: Serialize + ?Sized>(&mut self, name: impl AsRef<Path>, value: &T) -> Result<PathBuf> {
        let mut s = serde_json::to_string_pretty(value)?;
        s.push('\n');
        self.text(name, &s)
    }

    pub fn finish(mut self, command: &str, seed: u64, config: serde_json::Value) -> Result<Manifest> {
        let hashed = serde_json::to_string(&serde_json::json!({
            "command": command,
            "seed": seed,
            "config": config,
        }))?;
        let manifest = Manifest {
            tool: "zenscope".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            seed,
            config_hash: sha256_hex(hashed.as_bytes()),
            config,
            artifacts: self
                .written
                .iter()
                .map(|(path, sha256)| ManifestEntry {
                    path: path.clone(),
                    sha256: sha256.clone(),
                })
                .collect(),
        };
        self.json(format!("manifest-{command}.json"), &manifest)?;
        Ok(manifest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sha256_known_vector() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn manifest_lists_artifacts() {
        let dir = tempfile::tempdir().unwrap();
        let mut out = Output::new(dir.path()).unwrap();
        out.text("a.txt", "x").unwrap();
        out.text("a.txt", "y").unwrap();
        let m = out.finish("demo", 7, serde_json::json!({"k": 1})).unwrap();
        assert_eq!(m.artifacts.len(), 1);
        assert_eq!(m.artifacts[0].sha256, sha256_hex(b"y"));
        assert!(dir.path().join("manifest-demo.json").exists());
    }
}

//! Run manifests: config snapshot, seed, code version, timestamps and
//! digests of every artifact written. Replaying a manifest's config and
//! seed must reproduce every output digest; the manifest itself is the one
//! file allowed to differ between runs (timestamps).

use crate::error::Result;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OutputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub config: BTreeMap<String, String>,
    pub seed: u64,
    pub version: String,
    pub started_unix: u64,
    pub finished_unix: u64,
    pub outputs: Vec<OutputDigest>,
}

pub fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

impl RunManifest {
    pub fn start(subcommand: &str, config: BTreeMap<String, String>, seed: u64) -> Self {
        RunManifest {
            subcommand: subcommand.to_string(),
            config,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            started_unix: unix_now(),
            finished_unix: 0,
            outputs: Vec::new(),
        }
    }

    /// Write `bytes` under the output directory and record its digest.
    pub fn write_artifact(&mut self, dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(name);
        std::fs::write(&path, bytes)?;
        self.outputs.push(OutputDigest {
            path: name.to_string(),
            sha256: sha256_hex(bytes),
        });
        Ok(path)
    }

    /// Finalize and write `manifest.json`.
    pub fn finish(mut self, dir: &Path) -> Result<PathBuf> {
        self.finished_unix = unix_now();
        std::fs::create_dir_all(dir)?;
        let path = dir.join("manifest.json");
        std::fs::write(&path, serde_json::to_vec_pretty(&self)?)?;
        Ok(path)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_stable() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn artifacts_recorded_and_manifest_written() {
        let dir = tempfile::tempdir().unwrap();
        let mut m = RunManifest::start("test", BTreeMap::new(), 7);
        m.write_artifact(dir.path(), "a.csv", b"x,y\n1,2\n").unwrap();
        assert_eq!(m.outputs.len(), 1);
        assert_eq!(m.outputs[0].path, "a.csv");
        let path = m.finish(dir.path()).unwrap();
        let text = std::fs::read_to_string(path).unwrap();
        let back: RunManifest = serde_json::from_str(&text).unwrap();
        assert_eq!(back.seed, 7);
        assert_eq!(back.outputs[0].sha256.len(), 64);
    }
}

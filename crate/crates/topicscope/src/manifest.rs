//! Run manifests (`manifest.jsonl`) and the per-store lock file.

use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};

use chrono::{SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{AppError, Result};
use crate::fsutil::hash_file;

pub const MANIFEST_FILE: &str = "manifest.jsonl";
pub const LOCK_FILE: &str = ".lock";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config: Value,
    /// Input file name → hex SHA-256.
    pub input_hashes: BTreeMap<String, String>,
    pub started_at: String,
    pub finished_at: String,
    pub tool_version: String,
    pub warnings: usize,
}

pub fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

impl RunManifest {
    pub fn start(command: &str, config: Value) -> Self {
        RunManifest {
            command: command.into(),
            config,
            input_hashes: BTreeMap::new(),
            started_at: now(),
            finished_at: String::new(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            warnings: 0,
        }
    }

    pub fn hash_input(&mut self, path: &Path) -> Result<()> {
        let h = hash_file(path)?;
        self.input_hashes.insert(path.display().to_string(), h);
        Ok(())
    }

    /// Stamps the finish time and appends one line to the store manifest.
    pub fn append(mut self, store: &Path) -> Result<()> {
        self.finished_at = now();
        let path = store.join(MANIFEST_FILE);
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(|e| AppError::io(&path, e))?;
        let mut line = serde_json::to_string(&self).expect("serializable");
        line.push('\n');
        f.write_all(line.as_bytes()).map_err(|e| AppError::io(&path, e))
    }
}

pub fn read_manifests(store: &Path) -> Result<Vec<RunManifest>> {
    let path = store.join(MANIFEST_FILE);
    if !path.exists() {
        return Ok(Vec::new());
    }
    let text = fs::read_to_string(&path).map_err(|e| AppError::io(&path, e))?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(|e| AppError::Usage(format!("{}: {e}", path.display()))))
        .collect()
}

/// Exclusive hold on a store directory; released on drop.
#[derive(Debug)]
pub struct StoreLock {
    path: PathBuf,
}

impl StoreLock {
    pub fn acquire(store: &Path) -> Result<Self> {
        fs::create_dir_all(store).map_err(|e| AppError::io(store, e))?;
        let path = store.join(LOCK_FILE);
        match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(mut f) => {
                let _ = writeln!(f, "{}", std::process::id());
                Ok(StoreLock { path })
            }
            Err(e) if e.kind() == ErrorKind::AlreadyExists => Err(AppError::Locked(store.to_path_buf())),
            Err(e) => Err(AppError::io(&path, e)),
        }
    }
}

impl Drop for StoreLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}

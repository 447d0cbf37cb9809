//! Newline-delimited JSON result cache.
//!
//! Each line is `{"key": ..., "value": ..., "created_at": ...}`. Lines that
//! fail to parse are skipped with a warning. Writes go to a temporary file in
//! the same directory which is then renamed over the cache file.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use log::warn;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const CACHE_ENV: &str = "DERANGEMENTS_CACHE";
pub const DEFAULT_PATH: &str = ".derangements-cache/cache.jsonl";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CacheRecord {
    pub key: String,
    pub value: Value,
    pub created_at: String,
}

#[derive(Debug, Clone)]
pub struct Cache {
    path: PathBuf,
}

/// Canonical key: `serde_json` maps are ordered, so equal requests encode
/// identically.
pub fn make_key(command: &str, params: Value) -> String {
    let key = serde_json::json!({
        "command": command,
        "engine": derangements::ENGINE_VERSION,
        "params": params,
    });
    key.to_string()
}

impl Cache {
    pub fn from_env() -> Self {
        Self::at(std::env::var_os(CACHE_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(DEFAULT_PATH)))
    }

    pub fn at(path: impl Into<PathBuf>) -> Self {
        Self { path: path.into() }
    }

    #[cfg(test)]
    pub fn path(&self) -> &std::path::Path {
        &self.path
    }

    fn records(&self) -> Vec<CacheRecord> {
        let text = match fs::read_to_string(&self.path) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Vec::new(),
            Err(e) => {
                warn!("cache {} unreadable: {e}", self.path.display());
                return Vec::new();
            }
        };
        text.lines()
            .enumerate()
            .filter(|(_, line)| !line.trim().is_empty())
            .filter_map(|(i, line)| match serde_json::from_str::<CacheRecord>(line) {
                Ok(r) => Some(r),
                Err(e) => {
                    warn!("skipping corrupt cache line {} in {}: {e}", i + 1, self.path.display());
                    None
                }
            })
            .collect()
    }

    pub fn get(&self, key: &str) -> Option<Value> {
        self.records().into_iter().rev().find(|r| r.key == key).map(|r| r.value)
    }

    /// Failures are logged and otherwise ignored.
    pub fn put(&self, key: &str, value: &Value) {
        if let Err(e) = self.try_put(key, value) {
            warn!("cache {} not written: {e}", self.path.display());
        }
    }

    fn try_put(&self, key: &str, value: &Value) -> io::Result<()> {
        let mut records = self.records();
        records.retain(|r| r.key != key);
        records.push(CacheRecord {
            key: key.to_string(),
            value: value.clone(),
            created_at: chrono::Utc::now().to_rfc3339(),
        });
        let dir = match self.path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
            _ => PathBuf::from("."),
        };
        fs::create_dir_all(&dir)?;
        let tmp = dir.join(format!(
            ".{}.{}.tmp",
            self.path.file_name().and_then(|n| n.to_str()).unwrap_or("cache"),
            std::process::id()
        ));
        {
            let mut file = fs::File::create(&tmp)?;
            for r in &records {
                let line = serde_json::to_string(r).map_err(io::Error::other)?;
                writeln!(file, "{line}")?;
            }
            file.sync_all()?;
        }
        fs::rename(&tmp, &self.path).inspect_err(|_| {
            let _ = fs::remove_file(&tmp);
        })
    }
}

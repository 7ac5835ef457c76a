//! Content-addressed result cache: one JSON file per (command, parameters,
//! tool version) key, written atomically. Corrupted or mismatched entries are
//! ignored and recomputed; I/O problems degrade to warnings, never to wrong
//! results.

use std::fs;
use std::path::PathBuf;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

/// Environment variable overriding the cache directory.
pub const CACHE_DIR_ENV: &str = "CIRC_RAMSEY_CACHE_DIR";

const DEFAULT_DIR: &str = ".circ-ramsey-cache";

pub struct Cache {
    dir: PathBuf,
    enabled: bool,
}

impl Cache {
    pub fn from_env(enabled: bool) -> Self {
        let dir = std::env::var_os(CACHE_DIR_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(DEFAULT_DIR));
        Cache { dir, enabled }
    }

    #[cfg(test)]
    fn at(dir: PathBuf) -> Self {
        Cache { dir, enabled: true }
    }

    /// Content key over the full run identity: version, command, normalized
    /// parameters, output format.
    pub fn key(version: &str, command: &str, params: &str, format: &str) -> String {
        let mut hasher = Sha256::new();
        hasher.update(format!("v={version}|cmd={command}|{params}|format={format}"));
        hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// The cached payload, if a well-formed entry with matching key and
    /// version exists.
    pub fn get(&self, key: &str, version: &str) -> Option<String> {
        if !self.enabled {
            return None;
        }
        let text = fs::read_to_string(self.path(key)).ok()?;
        let entry: Value = serde_json::from_str(&text).ok()?;
        if entry["key"].as_str() != Some(key) || entry["tool_version"].as_str() != Some(version) {
            return None;
        }
        entry["payload"].as_str().map(str::to_owned)
    }

    /// Store a payload under its key, atomically (write then rename).
    pub fn put(&self, key: &str, version: &str, command: &str, payload: &str) {
        if !self.enabled {
            return;
        }
        if let Err(err) = fs::create_dir_all(&self.dir) {
            eprintln!("warning: cannot create cache directory {}: {err}", self.dir.display());
            return;
        }
        let entry = json!({
            "key": key,
            "tool_version": version,
            "command": command,
            "payload": payload,
        });
        let tmp = self.dir.join(format!("{key}.json.tmp"));
        let target = self.path(key);
        let write = fs::write(&tmp, entry.to_string()).and_then(|_| fs::rename(&tmp, &target));
        if let Err(err) = write {
            eprintln!("warning: cache write failed for {}: {err}", target.display());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::at(dir.path().to_path_buf());
        let key = Cache::key("0.1.0", "tangent", "k=3", "json");
        assert_eq!(cache.get(&key, "0.1.0"), None);
        cache.put(&key, "0.1.0", "tangent", "16");
        assert_eq!(cache.get(&key, "0.1.0").as_deref(), Some("16"));
    }

    #[test]
    fn version_mismatch_misses() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::at(dir.path().to_path_buf());
        let key = Cache::key("0.1.0", "tangent", "k=3", "json");
        cache.put(&key, "0.1.0", "tangent", "16");
        assert_eq!(cache.get(&key, "0.2.0"), None);
        // And a version bump changes the key itself.
        assert_ne!(key, Cache::key("0.2.0", "tangent", "k=3", "json"));
    }

    #[test]
    fn corrupted_entries_are_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::at(dir.path().to_path_buf());
        let key = Cache::key("0.1.0", "tangent", "k=3", "json");
        cache.put(&key, "0.1.0", "tangent", "16");
        std::fs::write(dir.path().join(format!("{key}.json")), "{not json").unwrap();
        assert_eq!(cache.get(&key, "0.1.0"), None);
    }

    #[test]
    fn disabled_cache_is_inert() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache {
            dir: dir.path().to_path_buf(),
            enabled: false,
        };
        let key = Cache::key("0.1.0", "tangent", "k=3", "json");
        cache.put(&key, "0.1.0", "tangent", "16");
        assert_eq!(cache.get(&key, "0.1.0"), None);
        assert!(!dir.path().join(format!("{key}.json")).exists());
    }
}

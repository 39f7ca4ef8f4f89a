//! Persistent JSON cache of polynomials and transition tables.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct CacheFile {
    #[serde(rename = "schema-version")]
    schema_version: u32,
    entries: BTreeMap<String, Value>,
}

/// In-memory view of the cache file; `path = None` disables persistence.
#[derive(Debug, Default)]
pub struct Cache {
    path: Option<PathBuf>,
    entries: BTreeMap<String, Value>,
    dirty: bool,
    pub warnings: Vec<String>,
}

impl Cache {
    pub fn disabled() -> Self {
        Cache::default()
    }

    /// Loads `path`; a missing file is an empty cache, and a corrupt or
    /// foreign-version file is ignored with a warning.
    pub fn open(path: PathBuf) -> Self {
        let mut cache = Cache { path: Some(path.clone()), ..Cache::default() };
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return cache,
            Err(e) => {
                cache.warnings.push(format!("cache {} unreadable ({e}); continuing uncached", path.display()));
                cache.path = None;
                return cache;
            }
        };
        match serde_json::from_str::<CacheFile>(&text) {
            Ok(file) if file.schema_version == SCHEMA_VERSION => cache.entries = file.entries,
            Ok(file) => cache.warnings.push(format!(
                "cache {} has schema version {}, expected {SCHEMA_VERSION}; ignoring it",
                path.display(),
                file.schema_version
            )),
            Err(e) => cache.warnings.push(format!("cache {} is corrupt ({e}); rebuilding it", path.display())),
        }
        cache
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.get(key)
    }

    pub fn put(&mut self, key: String, value: Value) {
        if self.entries.get(&key) != Some(&value) {
            self.entries.insert(key, value);
            self.dirty = true;
        }
    }

    /// Writes through a temporary file and a rename. Failures only warn.
    pub fn save(&mut self) {
        let Some(path) = self.path.clone() else { return };
        if !self.dirty {
            return;
        }
        if let Err(e) = write_atomic(&path, &self.entries) {
            self.warnings.push(format!("could not write cache {} ({e}); results were not cached", path.display()));
        }
        self.dirty = false;
    }
}

fn write_atomic(path: &Path, entries: &BTreeMap<String, Value>) -> std::io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let file = CacheFile { schema_version: SCHEMA_VERSION, entries: entries.clone() };
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(format!(".tmp{}", std::process::id()));
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, serde_json::to_vec(&file)?)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

/// `--cache`, then `SUPERCHAR_CACHE` (both arrive through clap), then the user cache directory.
pub fn default_path() -> Option<PathBuf> {
    let base = std::env::var_os("XDG_CACHE_HOME")
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").filter(|v| !v.is_empty()).map(|h| PathBuf::from(h).join(".cache")))?;
    Some(base.join("superchar").join("cache.json"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn empty_cache_misses() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path().join("c.json"));
        assert!(cache.get("kl:1234:3412").is_none());
        assert!(cache.warnings.is_empty());
    }

    #[test]
    fn put_then_get_round_trips_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested").join("c.json");
        let mut cache = Cache::open(path.clone());
        cache.put("kl:1234:3412".into(), json!("1+q"));
        cache.put("kl:1234:3412".into(), json!("1+q"));
        cache.save();
        let again = Cache::open(path);
        assert_eq!(again.get("kl:1234:3412"), Some(&json!("1+q")));
    }

    #[test]
    fn version_mismatch_is_ignored_with_a_warning() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        fs::write(&path, r#"{"schema-version": 99, "entries": {"k": "1"}}"#).unwrap();
        let cache = Cache::open(path);
        assert!(cache.get("k").is_none());
        assert_eq!(cache.warnings.len(), 1);
    }

    #[test]
    fn corrupt_file_is_rebuilt() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        fs::write(&path, "{not json").unwrap();
        let mut cache = Cache::open(path.clone());
        assert_eq!(cache.warnings.len(), 1);
        cache.put("k".into(), json!("q"));
        cache.save();
        assert_eq!(Cache::open(path).get("k"), Some(&json!("q")));
    }

    #[test]
    fn unwritable_path_only_warns() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        fs::write(&blocker, "").unwrap();
        let mut cache = Cache::open(blocker.join("c.json"));
        cache.put("k".into(), json!("1"));
        cache.save();
        assert_eq!(cache.warnings.len(), 1);
    }
}

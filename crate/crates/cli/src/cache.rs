//! Content-addressed store for computed results.
//!
//! An entry is keyed by a SHA-256 digest of the functional's exact coefficients, the
//! method and the budget, so truncation variants and budget changes never collide.

use std::fs;
use std::path::{Path, PathBuf};

use bellcomm::model::{BellFunctional, DENSE_LIMIT};
use bellcomm::platonic::VectorConfiguration;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const CACHE_DIR_ENV: &str = "BELLCOMM_CACHE_DIR";
const ENTRY_VERSION: u32 = 1;

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Digest of the exact coefficient table; `None` when the table is too large to hash.
pub fn functional_hash(f: &BellFunctional) -> Option<String> {
    let s = f.scenario();
    if s.dense_len().is_none_or(|n| n > DENSE_LIMIT) {
        return None;
    }
    let mut h = Sha256::new();
    h.update(b"bellcomm-functional-v1");
    for n in [s.inputs_a, s.inputs_b, s.outputs_a, s.outputs_b] {
        h.update((n as u64).to_le_bytes());
    }
    h.update(f.denominator().to_le_bytes());
    for x in 0..s.inputs_a {
        for y in 0..s.inputs_b {
            for c in f.block(x, y) {
                h.update(c.to_le_bytes());
            }
        }
    }
    Some(hex(&h.finalize()))
}

/// Digest of a vector configuration's exact coordinates.
pub fn vectors_hash(v: &VectorConfiguration) -> String {
    let mut h = Sha256::new();
    h.update(b"bellcomm-vectors-v1");
    h.update(v.norm_sq().to_string());
    for row in v.coords() {
        for c in row {
            h.update(c.to_string());
            h.update(b",");
        }
        h.update(b";");
    }
    hex(&h.finalize())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub content: String,
    pub method: String,
    pub budget: String,
}

impl CacheKey {
    pub fn new(content: String, method: impl Into<String>, node_budget: Option<u64>) -> Self {
        let budget = node_budget.map_or_else(|| "unlimited".to_string(), |n| format!("nodes={n}"));
        Self { content, method: method.into(), budget }
    }

    fn file_name(&self) -> String {
        let mut h = Sha256::new();
        for part in [&self.content, &self.method, &self.budget] {
            h.update(part.as_bytes());
            h.update([0]);
        }
        format!("{}.json", hex(&h.finalize()))
    }
}

#[derive(Serialize, Deserialize)]
struct Entry {
    version: u32,
    key: CacheKey,
    result: serde_json::Value,
}

pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn disabled() -> Self {
        Self { dir: None }
    }

    #[cfg(test)]
    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Self { dir: Some(dir.into()) }
    }

    /// `$BELLCOMM_CACHE_DIR`, else `$XDG_CACHE_HOME/bellcomm`, else `~/.cache/bellcomm`.
    pub fn from_env() -> Self {
        let env = |k: &str| std::env::var_os(k).filter(|v| !v.is_empty()).map(PathBuf::from);
        let dir = env(CACHE_DIR_ENV)
            .or_else(|| env("XDG_CACHE_HOME").map(|d| d.join("bellcomm")))
            .or_else(|| env("HOME").map(|d| d.join(".cache").join("bellcomm")));
        Self { dir }
    }

    fn path(&self, key: &CacheKey) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(key.file_name()))
    }

    /// Cached result for `key`; unreadable or mismatched entries are reported and ignored.
    pub fn load<T: DeserializeOwned>(&self, key: &CacheKey) -> Option<T> {
        let path = self.path(key)?;
        let text = fs::read_to_string(&path).ok()?;
        let parsed = serde_json::from_str::<Entry>(&text)
            .and_then(|entry| Ok((entry.version, entry.key, serde_json::from_value::<T>(entry.result)?)));
        match parsed {
            Ok((version, stored, result)) if version == ENTRY_VERSION && stored == *key => Some(result),
            Ok(_) => {
                warn(&path, "key or version mismatch");
                None
            }
            Err(e) => {
                warn(&path, &e.to_string());
                None
            }
        }
    }

    /// Best effort: failures to write are reported, never fatal.
    pub fn store<T: Serialize>(&self, key: &CacheKey, result: &T) {
        let Some(path) = self.path(key) else { return };
        let result = serde_json::to_value(result).expect("cached results serialize");
        let entry = Entry { version: ENTRY_VERSION, key: key.clone(), result };
        let write = || -> std::io::Result<()> {
            fs::create_dir_all(path.parent().expect("entry has a directory"))?;
            let tmp = path.with_extension("tmp");
            fs::write(&tmp, serde_json::to_vec(&entry).map_err(std::io::Error::other)?)?;
            fs::rename(&tmp, &path)
        };
        if let Err(e) = write() {
            eprintln!("warning: could not write cache entry {}: {e}", path.display());
        }
    }
}

fn warn(path: &Path, why: &str) {
    eprintln!("warning: ignoring corrupt cache entry {}: {why}", path.display());
}

#[cfg(test)]
mod tests {
    use super::*;
    use bellcomm::catalog;
    use bellcomm::classical::{local_bound, BoundResult, Budget};

    #[test]
    fn hash_is_stable_and_content_sensitive() {
        let a = functional_hash(&catalog::build("magic2s").unwrap()).unwrap();
        assert_eq!(a, functional_hash(&catalog::build("magic2s").unwrap()).unwrap());
        assert_ne!(a, functional_hash(&catalog::build("magic2a").unwrap()).unwrap());
        // The registry name is not part of the content.
        let renamed = catalog::build("chsh").unwrap().with_name("other");
        assert_eq!(functional_hash(&renamed), functional_hash(&catalog::build("chsh").unwrap()));
    }

    #[test]
    fn round_trip_and_budget_miss() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::at(dir.path());
        let f = catalog::build("chsh").unwrap();
        let r = local_bound(&f, Budget::unlimited()).unwrap();
        let key = CacheKey::new(functional_hash(&f).unwrap(), "local", None);
        assert!(cache.load::<BoundResult>(&key).is_none());
        cache.store(&key, &r);
        assert_eq!(cache.load::<BoundResult>(&key).unwrap(), r);
        assert!(cache.load::<BoundResult>(&CacheKey::new(functional_hash(&f).unwrap(), "local", Some(10))).is_none());
    }

    #[test]
    fn corrupt_entries_are_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::at(dir.path());
        let key = CacheKey::new("abc".into(), "local", None);
        fs::write(cache.path(&key).unwrap(), "{ not json").unwrap();
        assert!(cache.load::<BoundResult>(&key).is_none());
    }

    #[test]
    fn vectors_hash_is_stable() {
        let v = bellcomm::platonic::e7_vectors();
        assert_eq!(vectors_hash(&v), vectors_hash(&bellcomm::platonic::e7_vectors()));
    }
}

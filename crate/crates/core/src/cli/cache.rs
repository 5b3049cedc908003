//! Best-effort on-disk cache keyed by the SHA-256 of a canonical JSON key.
//! Each entry stores a checksum of its value; entries that fail to parse,
//! verify or rebuild are discarded and recomputed.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const CACHE_DIR_ENV: &str = "INVLC_CACHE_DIR";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheStats {
    pub hits: usize,
    pub misses: usize,
    pub discarded: usize,
}

#[derive(Serialize, Deserialize)]
struct Stored {
    kind: String,
    key: Value,
    checksum: String,
    value: Value,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Default)]
pub struct Cache {
    dir: Option<PathBuf>,
    stats: Mutex<CacheStats>,
}

impl Cache {
    pub fn disabled() -> Cache {
        Cache::default()
    }

    pub fn at(dir: impl Into<PathBuf>) -> Cache {
        Cache { dir: Some(dir.into()), stats: Mutex::default() }
    }

    /// Uses the directory named by `INVLC_CACHE_DIR`, if set.
    pub fn from_env() -> Cache {
        match std::env::var_os(CACHE_DIR_ENV) {
            Some(d) if !d.is_empty() => Cache::at(PathBuf::from(d)),
            _ => Cache::disabled(),
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn stats(&self) -> CacheStats {
        *self.stats.lock().expect("cache stats")
    }

    fn path(&self, kind: &str, key: &Value) -> Option<PathBuf> {
        let hash = sha256_hex(key.to_string().as_bytes());
        self.dir.as_ref().map(|d| d.join(format!("{kind}-{hash}.json")))
    }

    fn bump(&self, f: impl FnOnce(&mut CacheStats)) {
        f(&mut self.stats.lock().expect("cache stats"));
    }

    /// Returns the cached value, or computes, validates and stores it.
    /// `rebuild` turns a stored value back into `T` and may reject it.
    pub fn get_or_compute<S, T, R, C>(&self, kind: &str, key: &Value, rebuild: R, compute: C) -> T
    where
        S: Serialize + DeserializeOwned,
        R: Fn(S) -> Option<T>,
        C: FnOnce() -> (T, S),
    {
        match self.try_get_or_compute(kind, key, rebuild, || Ok::<_, std::convert::Infallible>(compute())) {
            Ok(v) => v,
            Err(never) => match never {},
        }
    }

    /// As [`Cache::get_or_compute`]; errors from `compute` are returned and
    /// nothing is stored.
    pub fn try_get_or_compute<S, T, E, R, C>(&self, kind: &str, key: &Value, rebuild: R, compute: C) -> Result<T, E>
    where
        S: Serialize + DeserializeOwned,
        R: Fn(S) -> Option<T>,
        C: FnOnce() -> Result<(T, S), E>,
    {
        let Some(path) = self.path(kind, key) else {
            return Ok(compute()?.0);
        };
        if path.exists() {
            match self.load(&path, kind, key).and_then(&rebuild) {
                Some(v) => {
                    self.bump(|s| s.hits += 1);
                    return Ok(v);
                }
                None => {
                    log::warn!("discarding corrupted cache entry {}", path.display());
                    let _ = fs::remove_file(&path);
                    self.bump(|s| s.discarded += 1);
                }
            }
        } else {
            self.bump(|s| s.misses += 1);
        }
        let (value, stored) = compute()?;
        if let Err(e) = self.store(&path, kind, key, &stored) {
            log::warn!("could not write cache entry {}: {e}", path.display());
        }
        Ok(value)
    }

    fn load<S: DeserializeOwned>(&self, path: &Path, kind: &str, key: &Value) -> Option<S> {
        let text = fs::read_to_string(path).ok()?;
        let entry: Stored = serde_json::from_str(&text).ok()?;
        if entry.kind != kind || &entry.key != key || entry.checksum != sha256_hex(entry.value.to_string().as_bytes()) {
            return None;
        }
        serde_json::from_value(entry.value).ok()
    }

    fn store<S: Serialize>(&self, path: &Path, kind: &str, key: &Value, value: &S) -> std::io::Result<()> {
        let value = serde_json::to_value(value).map_err(std::io::Error::other)?;
        let entry = Stored {
            kind: kind.to_string(),
            key: key.clone(),
            checksum: sha256_hex(value.to_string().as_bytes()),
            value,
        };
        let dir = path.parent().expect("cache file has a directory");
        fs::create_dir_all(dir)?;
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, serde_json::to_string(&entry).map_err(std::io::Error::other)?)?;
        fs::rename(tmp, path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn round_trip_and_tamper() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::at(dir.path());
        let key = json!({"what": "squares", "n": 4});
        let compute = || {
            let v: Vec<u32> = (0..4).map(|k| k * k).collect();
            (v.clone(), v)
        };
        let first: Vec<u32> = cache.get_or_compute("sq", &key, Some, compute);
        let second: Vec<u32> = cache.get_or_compute("sq", &key, Some, || panic!("should hit"));
        assert_eq!(first, second);
        assert_eq!(cache.stats(), CacheStats { hits: 1, misses: 1, discarded: 0 });

        let path = fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
        let text = fs::read_to_string(&path).unwrap().replace("[0,1,4,9]", "[0,1,4,10]");
        fs::write(&path, text).unwrap();
        let third: Vec<u32> = cache.get_or_compute("sq", &key, Some, compute);
        assert_eq!(third, first);
        assert_eq!(cache.stats().discarded, 1);
        let fourth: Vec<u32> = cache.get_or_compute("sq", &key, Some, || panic!("recomputed entry is stored"));
        assert_eq!(fourth, first);
    }

    #[test]
    fn disabled_cache_always_computes() {
        let cache = Cache::disabled();
        let v: u8 = cache.get_or_compute::<u8, _, _, _>("k", &json!(1), Some, || (7, 7));
        assert_eq!(v, 7);
        assert_eq!(cache.stats(), CacheStats::default());
    }
}

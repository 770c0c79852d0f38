//! On-disk cache of coset tables.
//!
//! Entries are keyed by a SHA-256 of the tool version, the canonical text of
//! the presentation and the canonical text of the subgroup, so formatting
//! changes to an input file still hit. Each entry stores the table as a JSON
//! string next to its own checksum; a version or checksum mismatch is a
//! miss, never a wrong answer.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use rankgrad::coset::{enumerate, EnumerateError};
use rankgrad::{CosetTable, Presentation, SubgroupSpec};

pub const CACHE_ENV: &str = "RANKGRAD_CACHE_DIR";
const VERSION: &str = env!("CARGO_PKG_VERSION");

static ENUMERATIONS: AtomicUsize = AtomicUsize::new(0);

/// Enumerations actually run by [`Cache::enumerate`] and
/// [`enumerate_cached`] in this process.
pub fn enumerations() -> usize {
    ENUMERATIONS.load(Ordering::Relaxed)
}

#[derive(Serialize, Deserialize)]
struct Entry {
    version: String,
    key: String,
    checksum: String,
    table: String,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Cache {
        Cache { dir: dir.into() }
    }

    /// `explicit`, else the environment variable, else no cache.
    pub fn resolve(explicit: Option<&Path>) -> Option<Cache> {
        explicit.map(Path::to_path_buf).or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from)).map(Cache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(p: &Presentation, s: &SubgroupSpec) -> String {
        let text = format!("rankgrad {VERSION}\n{}--\n{}", p.canonical_text(), s.canonical_text(p.names()));
        sha256_hex(text.as_bytes())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn load(&self, key: &str) -> Option<CosetTable> {
        let bytes = fs::read(self.path(key)).ok()?;
        let entry: Entry = serde_json::from_slice(&bytes).ok()?;
        if entry.version != VERSION || entry.key != key || entry.checksum != sha256_hex(entry.table.as_bytes()) {
            return None;
        }
        serde_json::from_str(&entry.table).ok()
    }

    pub fn store(&self, key: &str, t: &CosetTable) -> io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let table = serde_json::to_string(t).map_err(io::Error::other)?;
        let entry = Entry { version: VERSION.into(), key: key.into(), checksum: sha256_hex(table.as_bytes()), table };
        // write then rename so a concurrent reader never sees half a file
        let tmp = self.dir.join(format!("{key}.{}.tmp", std::process::id()));
        fs::write(&tmp, serde_json::to_vec(&entry).map_err(io::Error::other)?)?;
        fs::rename(tmp, self.path(key))
    }

    /// Table of `s`, from the cache when possible. The flag reports a hit.
    pub fn enumerate(&self, p: &Presentation, s: &SubgroupSpec, cap: usize) -> Result<(CosetTable, bool), EnumerateError> {
        let key = Cache::key(p, s);
        if let Some(t) = self.load(&key) {
            return Ok((t, true));
        }
        ENUMERATIONS.fetch_add(1, Ordering::Relaxed);
        let t = enumerate(p, s, cap)?;
        // a cache that cannot be written only costs time
        let _ = self.store(&key, &t);
        Ok((t, false))
    }
}

/// [`Cache::enumerate`] when a cache is configured, plain enumeration
/// otherwise.
pub fn enumerate_cached(cache: Option<&Cache>, p: &Presentation, s: &SubgroupSpec, cap: usize) -> Result<(CosetTable, bool), EnumerateError> {
    match cache {
        Some(c) => c.enumerate(p, s, cap),
        None => {
            ENUMERATIONS.fetch_add(1, Ordering::Relaxed);
            Ok((enumerate(p, s, cap)?, false))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rankgrad::presets::preset;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let f = preset("f2").unwrap();
        let s = SubgroupSpec::new(["a^2", "b", "a b a^-1"].iter().map(|w| f.presentation.parse_word(w).unwrap()).collect());
        let (t, hit) = cache.enumerate(&f.presentation, &s, 1000).unwrap();
        assert!(!hit);
        let key = Cache::key(&f.presentation, &s);
        assert_eq!(cache.load(&key).unwrap(), t);

        let path = cache.path(&key);
        let mut entry: Entry = serde_json::from_slice(&fs::read(&path).unwrap()).unwrap();
        entry.table = entry.table.replace("\"index\":2", "\"index\":3");
        fs::write(&path, serde_json::to_vec(&entry).unwrap()).unwrap();
        assert!(cache.load(&key).is_none());
        let (again, hit) = cache.enumerate(&f.presentation, &s, 1000).unwrap();
        assert!(!hit);
        assert_eq!(again, t);
    }
}

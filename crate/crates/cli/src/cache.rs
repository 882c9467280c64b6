//! Versioned JSON-lines store of counts.
//!
//! One record per line. A later line for the same key wins, except that a
//! published-table record never replaces an enumerated one. Enumerated
//! records from another engine version are ignored on load.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use trifractal::formulas::Provenance;

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CacheKey {
    pub quantity: String,
    pub family: String,
    pub n: u64,
    pub k: u32,
    /// Canonical rendering of the options that change the count.
    pub options: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub format: u32,
    #[serde(flatten)]
    pub key: CacheKey,
    pub count: String,
    pub provenance: Provenance,
    pub engine: String,
    pub elapsed_ms: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("cache {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

pub struct ResultCache {
    path: PathBuf,
    entries: BTreeMap<CacheKey, CacheEntry>,
}

impl ResultCache {
    pub fn open(path: &Path) -> Result<Self, CacheError> {
        let io = |source| CacheError::Io { path: path.to_owned(), source };
        let mut cache = ResultCache { path: path.to_owned(), entries: BTreeMap::new() };
        let file = match File::open(path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(cache),
            Err(e) => return Err(io(e)),
        };
        file.lock_shared().map_err(io)?;
        for line in BufReader::new(&file).lines() {
            let line = line.map_err(io)?;
            // unreadable lines come from other formats; skip rather than fail
            let Ok(entry) = serde_json::from_str::<CacheEntry>(&line) else { continue };
            if entry.format != FORMAT_VERSION {
                continue;
            }
            if entry.provenance == Provenance::Enumerated && entry.engine != ENGINE_VERSION {
                continue;
            }
            cache.merge(entry);
        }
        Ok(cache)
    }

    fn merge(&mut self, entry: CacheEntry) -> bool {
        if let Some(old) = self.entries.get(&entry.key) {
            if old.provenance == Provenance::Enumerated && entry.provenance != Provenance::Enumerated {
                return false;
            }
        }
        self.entries.insert(entry.key.clone(), entry);
        true
    }

    pub fn get(&self, key: &CacheKey) -> Option<&CacheEntry> {
        self.entries.get(key)
    }

    /// Records `entry` in memory and appends it to the file under an exclusive lock.
    pub fn insert(&mut self, entry: CacheEntry) -> Result<bool, CacheError> {
        if !self.merge(entry.clone()) {
            return Ok(false);
        }
        let io = |source| CacheError::Io { path: self.path.clone(), source };
        let mut file = OpenOptions::new().create(true).append(true).open(&self.path).map_err(io)?;
        file.lock().map_err(io)?;
        let mut line = serde_json::to_string(&entry).expect("cache entries serialise");
        line.push('\n');
        file.write_all(line.as_bytes()).map_err(io)?;
        Ok(true)
    }

    #[cfg(test)]
    pub fn len(&self) -> usize {
        self.entries.len()
    }
}

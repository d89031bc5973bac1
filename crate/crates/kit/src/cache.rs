//! Content-addressed cache of enumerated submodule lattices.
//!
//! Entries live under `$SPECTRAL_KIT_CACHE/<sha256>.json`, keyed by the
//! library version and the canonical module spec. Writes go to a temporary
//! file in the same directory and are then renamed into place.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use spectral_core::bitset::BitSet;
use spectral_core::modlat::{FiniteModule, SubmoduleLattice};

use crate::error::KitError;

pub const CACHE_ENV: &str = "SPECTRAL_KIT_CACHE";
const VERSION: &str = env!("CARGO_PKG_VERSION");

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

#[derive(Serialize, Deserialize)]
struct Entry {
    version: String,
    key: String,
    universe: usize,
    members: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Cache {
        Cache { dir: dir.into() }
    }

    /// The cache named by `SPECTRAL_KIT_CACHE`, or none when unset or empty.
    pub fn from_env() -> Option<Cache> {
        std::env::var_os(CACHE_ENV)
            .filter(|v| !v.is_empty())
            .map(Cache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path_for(&self, key: &str) -> PathBuf {
        let mut h = Sha256::new();
        h.update(VERSION.as_bytes());
        h.update(b"\n");
        h.update(key.as_bytes());
        self.dir.join(format!("{}.json", hex::encode(h.finalize())))
    }

    fn load(&self, key: &str, module: &Arc<FiniteModule>) -> Option<SubmoduleLattice> {
        let text = std::fs::read_to_string(self.path_for(key)).ok()?;
        let entry: Entry = serde_json::from_str(&text).ok()?;
        if entry.version != VERSION || entry.key != key || entry.universe != module.size() {
            return None;
        }
        if entry.members.iter().flatten().any(|&x| x >= entry.universe) {
            return None;
        }
        let members = entry
            .members
            .iter()
            .map(|m| BitSet::from_indices(entry.universe, m.iter().copied()))
            .collect();
        SubmoduleLattice::from_members(module.clone(), members).ok()
    }

    fn store(&self, key: &str, lattice: &SubmoduleLattice) -> Result<(), KitError> {
        std::fs::create_dir_all(&self.dir)?;
        let entry = Entry {
            version: VERSION.to_string(),
            key: key.to_string(),
            universe: lattice.module().size(),
            members: lattice.members().iter().map(|m| m.to_vec()).collect(),
        };
        let target = self.path_for(key);
        let tmp = self.dir.join(format!(
            ".tmp-{}-{}",
            std::process::id(),
            TMP_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        std::fs::write(&tmp, serde_json::to_vec(&entry)?)?;
        std::fs::rename(&tmp, &target).inspect_err(|_| {
            let _ = std::fs::remove_file(&tmp);
        })?;
        Ok(())
    }

    /// Loads the lattice for `key`, or enumerates and stores it. Unreadable
    /// or stale entries are recomputed; failures to write are ignored.
    pub fn lattice(
        &self,
        key: &str,
        module: &Arc<FiniteModule>,
        enumerate: impl FnOnce() -> spectral_core::Result<SubmoduleLattice>,
    ) -> Result<SubmoduleLattice, KitError> {
        if let Some(l) = self.load(key, module) {
            return Ok(l);
        }
        let l = enumerate()?;
        let _ = self.store(key, &l);
        Ok(l)
    }
}

/// Enumerates through the cache when one is configured.
pub fn cached_lattice(
    cache: Option<&Cache>,
    key: &str,
    module: &Arc<FiniteModule>,
    limit: usize,
) -> Result<SubmoduleLattice, KitError> {
    if module.size() > limit {
        return Err(spectral_core::Error::Resource {
            what: "module size for submodule enumeration",
            size: module.size(),
            limit,
        }
        .into());
    }
    let enumerate = || SubmoduleLattice::enumerate_with_limit(module.clone(), limit);
    match cache {
        Some(c) => c.lattice(key, module, enumerate),
        None => Ok(enumerate()?),
    }
}

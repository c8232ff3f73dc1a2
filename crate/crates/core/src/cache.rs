//! On-disk cache of search results.
//!
//! A JSON object mapping `"n,k"` (identity patterns `I_k`) or
//! `"n,<hash>"` (any other pattern) to a [`SearchOutcome`].

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::bitmatrix::BitMatrix;
use crate::error::{Error, Result};
use crate::strong::search::{SearchOutcome, SearchStatus};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ResultsCache {
    pub entries: BTreeMap<String, SearchOutcome>,
}

/// First 16 hex digits of the SHA-256 of the pattern's text form.
pub fn pattern_hash(q: &BitMatrix) -> String {
    let digest = Sha256::digest(q.serialize().as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

pub fn cache_key(n: usize, q: &BitMatrix) -> String {
    if q.rows() == q.cols() && *q == BitMatrix::identity(q.rows()).expect("valid") {
        format!("{n},{}", q.rows())
    } else {
        format!("{n},{}", pattern_hash(q))
    }
}

impl ResultsCache {
    /// Reads `path`; a missing file is an empty cache.
    pub fn load(path: &Path) -> Result<Self> {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Self::default()),
            Err(e) => return Err(e.into()),
        };
        let entries = serde_json::from_str(&text)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Ok(ResultsCache { entries })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(&self.entries).expect("serializable");
        fs::write(path, text + "\n")?;
        Ok(())
    }

    pub fn get(&self, n: usize, q: &BitMatrix) -> Option<&SearchOutcome> {
        self.entries.get(&cache_key(n, q))
    }

    /// Stores `outcome` unless the cached entry is at least as good: exact
    /// beats inexact, then more ones wins. Returns whether it was stored.
    pub fn insert(&mut self, n: usize, q: &BitMatrix, outcome: SearchOutcome) -> bool {
        let key = cache_key(n, q);
        let rank = |o: &SearchOutcome| (o.status == SearchStatus::Exact, o.best_ones);
        if self.entries.get(&key).is_some_and(|old| rank(old) >= rank(&outcome)) {
            return false;
        }
        self.entries.insert(key, outcome);
        true
    }

    /// Exact `M(n, I_k)` values held in the cache.
    pub fn exact_identity_value(&self, n: usize, k: usize) -> Option<u64> {
        self.entries
            .get(&format!("{n},{k}"))
            .filter(|o| o.status == SearchStatus::Exact)
            .map(|o| o.best_ones)
    }
}

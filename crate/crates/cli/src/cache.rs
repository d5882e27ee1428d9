//! On-disk cache of computed expansions.
//!
//! An entry lives in `<dir>/<key>.json`, where the key is the SHA-256 of its
//! (kind, weight, prec, ring, code version) tuple. The file repeats the tuple and carries
//! the SHA-256 of the payload; an entry whose tuple or hash does not match is poisoned and
//! is recomputed and overwritten.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

/// Bumped whenever the payload encoding or any cached computation changes.
pub const CODE_VERSION: &str = concat!("skc-", env!("CARGO_PKG_VERSION"), "/1");

/// Largest entry read back from disk.
pub const MAX_ENTRY_BYTES: usize = 64 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CacheKey {
    pub kind: String,
    pub weight: u32,
    pub prec: u64,
    pub ring: String,
    pub version: String,
}

impl CacheKey {
    pub fn new(kind: &str, weight: u32, prec: u64, ring: &str) -> Self {
        Self { kind: kind.into(), weight, prec, ring: ring.into(), version: CODE_VERSION.into() }
    }

    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for part in [self.kind.as_str(), &self.weight.to_string(), &self.prec.to_string(), &self.ring, &self.version] {
            h.update((part.len() as u64).to_le_bytes());
            h.update(part.as_bytes());
        }
        hex::encode(h.finalize())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Entry {
    key: CacheKey,
    sha256: String,
    payload: String,
}

fn payload_hash(payload: &str) -> String {
    hex::encode(Sha256::digest(payload.as_bytes()))
}

/// Encodes an entry file.
pub fn encode_entry(key: &CacheKey, payload: &str) -> String {
    let e = Entry { key: key.clone(), sha256: payload_hash(payload), payload: payload.into() };
    serde_json::to_string(&e).expect("entries serialize")
}

/// The payload of an entry file, if it belongs to `key` and its hash verifies.
pub fn decode_entry(bytes: &[u8], key: &CacheKey) -> Option<String> {
    if bytes.len() > MAX_ENTRY_BYTES {
        return None;
    }
    let e: Entry = serde_json::from_slice(bytes).ok()?;
    (e.key == *key && e.sha256 == payload_hash(&e.payload)).then_some(e.payload)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lookup {
    Hit,
    Miss,
    /// An entry existed but failed verification or decoding.
    Poisoned,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> CliResult<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(format!("{}.json", key.digest()))
    }

    fn read(&self, key: &CacheKey) -> (Lookup, Option<String>) {
        match std::fs::read(self.path(key)) {
            Ok(bytes) => match decode_entry(&bytes, key) {
                Some(p) => (Lookup::Hit, Some(p)),
                None => (Lookup::Poisoned, None),
            },
            Err(_) => (Lookup::Miss, None),
        }
    }

    /// Writes through a temporary file in the cache directory and renames it into place.
    pub fn store(&self, key: &CacheKey, payload: &str) -> CliResult<()> {
        let path = self.path(key);
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(|e| CliError::io(&self.dir, e))?;
        tmp.write_all(encode_entry(key, payload).as_bytes()).map_err(|e| CliError::io(tmp.path(), e))?;
        tmp.persist(&path).map_err(|e| CliError::io(&path, e.error))?;
        Ok(())
    }

    /// Returns the decoded cached value, or computes, stores and returns a fresh one.
    ///
    /// `decode` also runs on fresh payloads, so a hit and a miss yield the same value.
    pub fn get_or_compute<T>(
        &self,
        key: &CacheKey,
        compute: impl FnOnce() -> CliResult<String>,
        decode: impl Fn(&str) -> CliResult<T>,
    ) -> CliResult<(T, Lookup)> {
        let (mut lookup, payload) = self.read(key);
        if let Some(p) = payload {
            match decode(&p) {
                Ok(v) => return Ok((v, lookup)),
                Err(_) => lookup = Lookup::Poisoned,
            }
        }
        let fresh = compute()?;
        self.store(key, &fresh)?;
        Ok((decode(&fresh)?, lookup))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entries_round_trip_and_reject_tampering() {
        let key = CacheKey::new("sk-lift", 10, 6, "Q");
        let text = encode_entry(&key, "payload");
        assert_eq!(decode_entry(text.as_bytes(), &key).as_deref(), Some("payload"));
        let other = CacheKey::new("sk-lift", 12, 6, "Q");
        assert_eq!(decode_entry(text.as_bytes(), &other), None);
        let tampered = text.replace("\"payload\"", "\"paYload\"");
        assert_eq!(decode_entry(tampered.as_bytes(), &key), None);
    }

    #[test]
    fn keys_separate_their_fields() {
        let a = CacheKey::new("ab", 1, 1, "c");
        let b = CacheKey::new("a", 1, 1, "bc");
        assert_ne!(a.digest(), b.digest());
    }

    #[test]
    fn poisoned_entries_are_recomputed() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path()).unwrap();
        let key = CacheKey::new("test", 4, 1, "Q");
        let ok = |s: &str| -> CliResult<String> { Ok(s.to_string()) };
        let (v, l) = cache.get_or_compute(&key, || Ok("x".into()), ok).unwrap();
        assert_eq!((v.as_str(), l), ("x", Lookup::Miss));
        let (_, l) = cache.get_or_compute(&key, || panic!("cached"), ok).unwrap();
        assert_eq!(l, Lookup::Hit);
        std::fs::write(cache.path(&key), b"{\"garbage\":1}").unwrap();
        let (v, l) = cache.get_or_compute(&key, || Ok("x".into()), ok).unwrap();
        assert_eq!((v.as_str(), l), ("x", Lookup::Poisoned));
        let (_, l) = cache.get_or_compute(&key, || panic!("repaired"), ok).unwrap();
        assert_eq!(l, Lookup::Hit);
    }
}

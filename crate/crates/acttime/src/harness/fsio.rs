//! Atomic file writes and content digests for reproducibility checks.

use std::io::Write;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Write via a temp file in the same directory plus rename, so
/// concurrent suites sharing an output directory never observe a
/// half-written file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.persist(path)
        .map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

/// SHA-256 of a file's bytes, hex encoded.
pub fn file_digest(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(hex::encode(Sha256::digest(bytes)))
}

/// SHA-256 of a string, hex encoded.
pub fn text_digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// A 64-bit sub-seed derived from a base seed and a stream label, so
/// independent campaigns own disjoint deterministic RNG streams.
pub fn subseed(seed: u64, label: &str) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update(label.as_bytes());
    let digest = hasher.finalize();
    // keep sub-seeds within i64 range so they serialize cleanly in TOML
    u64::from_le_bytes(digest[..8].try_into().expect("digest is long enough")) >> 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested").join("file.txt");
        write_atomic(&path, b"hello").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"hello");
        write_atomic(&path, b"replaced").unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"replaced");
    }

    #[test]
    fn subseed_is_stable_and_label_sensitive() {
        assert_eq!(subseed(42, "a"), subseed(42, "a"));
        assert_ne!(subseed(42, "a"), subseed(42, "b"));
        assert_ne!(subseed(42, "a"), subseed(43, "a"));
    }
}

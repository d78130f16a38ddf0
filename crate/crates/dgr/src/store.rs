//! Witness files named by the SHA-256 of their canonical text.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use dgr_core::DgrSystem;
use sha2::{Digest, Sha256};

use crate::format::{emit_dgr, parse_dgr};

/// Hex SHA-256 of the canonical form's text. Systems that differ only by
/// ruler order or reflection share a key.
pub fn witness_key(s: &DgrSystem) -> String {
    let text = emit_dgr(&s.canonical_form());
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Writes the canonical form of `s` to `<dir>/<key>.dgr` (idempotent) and
/// returns the key.
pub fn store_witness(dir: &Path, s: &DgrSystem) -> io::Result<String> {
    fs::create_dir_all(dir)?;
    let key = witness_key(s);
    let path = witness_path(dir, &key);
    if !path.exists() {
        fs::write(&path, emit_dgr(&s.canonical_form()))?;
    }
    Ok(key)
}

pub fn witness_path(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("{key}.dgr"))
}

/// Reads a stored witness and checks that its content still matches the key.
pub fn load_witness(dir: &Path, key: &str) -> io::Result<DgrSystem> {
    let text = fs::read_to_string(witness_path(dir, key))?;
    let s = parse_dgr(&text).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
    if witness_key(&s) != key {
        return Err(io::Error::new(io::ErrorKind::InvalidData, format!("witness {key} does not match its name")));
    }
    Ok(s)
}

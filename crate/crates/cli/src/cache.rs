//! On-disk cache of smallest-prime-factor tables.
//!
//! Layout, all integers little endian:
//!
//! | bytes | content |
//! |-------|---------|
//! | 8     | magic `PRTSPF\r\n` |
//! | 1     | format version ([`VERSION`]) |
//! | 8     | limit `L` as `u64` |
//! | 4(L+1)| `spf[0..=L]` as `u32` |

use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use pretentious_core::FactorSieve;

use crate::error::{HarnessError, Result};

pub const MAGIC: [u8; 8] = *b"PRTSPF\r\n";
pub const VERSION: u8 = 1;
const HEADER_LEN: usize = 17;

pub fn cache_path(dir: &Path, limit: u64) -> PathBuf {
    dir.join(format!("sieve-{limit}.spf"))
}

pub fn store(path: &Path, sieve: &FactorSieve) -> Result<()> {
    let err = |e| HarnessError::io(path, e);
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    }
    let mut w = BufWriter::new(std::fs::File::create(path).map_err(err)?);
    w.write_all(&MAGIC).map_err(err)?;
    w.write_all(&[VERSION]).map_err(err)?;
    w.write_all(&sieve.limit().to_le_bytes()).map_err(err)?;
    for &v in sieve.as_slice() {
        w.write_all(&v.to_le_bytes()).map_err(err)?;
    }
    w.flush().map_err(err)
}

/// Reads a cached table for `limit`. `Ok(None)` when the file is absent,
/// has a different version or limit, or fails validation.
pub fn load(path: &Path, limit: u64) -> Result<Option<FactorSieve>> {
    let mut file = match std::fs::File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(HarnessError::io(path, e)),
    };
    let mut bytes = Vec::new();
    file.read_to_end(&mut bytes)
        .map_err(|e| HarnessError::io(path, e))?;
    if bytes.len() < HEADER_LEN || bytes[..8] != MAGIC || bytes[8] != VERSION {
        return Ok(None);
    }
    let stored = u64::from_le_bytes(bytes[9..17].try_into().expect("8 bytes"));
    let body = &bytes[HEADER_LEN..];
    if stored != limit || body.len() as u64 != 4 * (limit + 1) {
        return Ok(None);
    }
    let spf: Vec<u32> = body
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes(c.try_into().expect("4 bytes")))
        .collect();
    Ok(FactorSieve::from_spf(spf).ok())
}

/// Cached table if present and valid, otherwise a fresh build. The flag
/// reports whether the cache was used.
pub fn load_or_build(dir: &Path, limit: u64) -> Result<(FactorSieve, bool)> {
    if let Some(s) = load(&cache_path(dir, limit), limit)? {
        return Ok((s, true));
    }
    Ok((FactorSieve::build(limit)?, false))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_rejection() {
        let dir = tempfile::tempdir().unwrap();
        let sieve = FactorSieve::build(1000).unwrap();
        let path = cache_path(dir.path(), 1000);
        assert!(load(&path, 1000).unwrap().is_none());
        store(&path, &sieve).unwrap();
        assert!(load(&path, 1000).unwrap().unwrap() == sieve);
        assert!(load(&path, 999).unwrap().is_none());

        let mut bytes = std::fs::read(&path).unwrap();
        bytes[8] = VERSION + 1;
        std::fs::write(&path, &bytes).unwrap();
        assert!(load(&path, 1000).unwrap().is_none());

        bytes[8] = VERSION;
        bytes[HEADER_LEN + 4 * 10] = 3; // 3 does not divide 10
        std::fs::write(&path, &bytes).unwrap();
        assert!(load(&path, 1000).unwrap().is_none());
    }
}

use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::CoefficientSeries;
use crate::error::{Error, Result};

pub const CACHE_VERSION: u32 = 1;
const MAGIC: &str = "AUTLF-CACHE";

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn entry_path(dir: &Path, key: &str) -> Result<PathBuf> {
    let ok = !key.is_empty()
        && !key.starts_with('.')
        && key.chars().all(|ch| ch.is_ascii_alphanumeric() || matches!(ch, '-' | '_' | '.'));
    if !ok {
        return Err(Error::domain(format!("invalid cache key {key:?}")));
    }
    Ok(dir.join(format!("{key}.cache")))
}

fn lock_file(dir: &Path) -> Result<File> {
    let path = dir.join(".lock");
    OpenOptions::new()
        .create(true)
        .truncate(false)
        .write(true)
        .open(&path)
        .map_err(|e| Error::io(&path, e))
}

/// Write `series` under `key` in `dir`. The file is one header line
/// `AUTLF-CACHE v1 sha256=<hex>` followed by the JSON payload whose digest
/// the header records. Writers take an exclusive lock on `dir/.lock` and
/// replace the entry atomically.
pub fn cache_store(series: &CoefficientSeries, dir: &Path, key: &str) -> Result<PathBuf> {
    let path = entry_path(dir, key)?;
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let payload = serde_json::to_string(series).map_err(|e| Error::io(&path, std::io::Error::other(e)))?;
    let digest = hex(&Sha256::digest(payload.as_bytes()));

    let lock = lock_file(dir)?;
    lock.lock().map_err(|e| Error::io(dir, e))?;
    let tmp = dir.join(format!(".{key}.tmp"));
    let write = || -> std::io::Result<()> {
        let mut f = File::create(&tmp)?;
        writeln!(f, "{MAGIC} v{CACHE_VERSION} sha256={digest}")?;
        f.write_all(payload.as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, &path)
    };
    let result = write().map_err(|e| Error::io(&path, e));
    lock.unlock().map_err(|e| Error::io(dir, e))?;
    result.map(|_| path)
}

/// Read the entry stored under `key`. Distinguishes a missing entry, a
/// version mismatch and a checksum failure.
pub fn cache_load(dir: &Path, key: &str) -> Result<CoefficientSeries> {
    let path = entry_path(dir, key)?;
    if !path.exists() {
        return Err(Error::CacheNotFound(path));
    }
    let lock = lock_file(dir)?;
    lock.lock_shared().map_err(|e| Error::io(dir, e))?;
    let text = fs::read_to_string(&path);
    lock.unlock().map_err(|e| Error::io(dir, e))?;
    let text = text.map_err(|e| Error::io(&path, e))?;

    let (header, payload) = text.split_once('\n').unwrap_or((text.as_str(), ""));
    let mut parts = header.split_whitespace();
    if parts.next() != Some(MAGIC) {
        return Err(Error::CacheVersion {
            path,
            found: header.chars().take(40).collect(),
            expected: CACHE_VERSION,
        });
    }
    let version = parts.next().unwrap_or("");
    if version != format!("v{CACHE_VERSION}") {
        return Err(Error::CacheVersion {
            path,
            found: version.to_string(),
            expected: CACHE_VERSION,
        });
    }
    let stored = parts.next().and_then(|p| p.strip_prefix("sha256=")).unwrap_or("");
    if stored != hex(&Sha256::digest(payload.as_bytes())) {
        return Err(Error::CacheChecksum(path));
    }
    serde_json::from_str(payload).map_err(|_| Error::CacheChecksum(path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{delta_coefficients, divisor_power_coeffs, eisenstein_qcoeffs};
    use crate::numerics::c;

    #[test]
    fn integer_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let s = delta_coefficients(10_000).unwrap();
        cache_store(&s, dir.path(), "delta-10000").unwrap();
        assert_eq!(cache_load(dir.path(), "delta-10000").unwrap(), s);
        let e = eisenstein_qcoeffs(12, 100).unwrap();
        cache_store(&e, dir.path(), "e12").unwrap();
        assert_eq!(cache_load(dir.path(), "e12").unwrap(), e);
    }

    #[test]
    fn complex_round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let s = divisor_power_coeffs(c(0.123456789, -2.718281828), 500).unwrap();
        cache_store(&s, dir.path(), "div").unwrap();
        let back = cache_load(dir.path(), "div").unwrap();
        for (a, b) in s.to_complex().iter().zip(back.to_complex()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
    }

    #[test]
    fn failures_are_distinguished() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(cache_load(dir.path(), "absent"), Err(Error::CacheNotFound(_))));
        let s = delta_coefficients(20).unwrap();
        let path = cache_store(&s, dir.path(), "d").unwrap();

        let text = fs::read_to_string(&path).unwrap();
        fs::write(&path, text.replacen("-24", "-25", 1)).unwrap();
        assert!(matches!(cache_load(dir.path(), "d"), Err(Error::CacheChecksum(_))));

        fs::write(&path, text.replacen(" v1 ", " v9 ", 1)).unwrap();
        assert!(matches!(cache_load(dir.path(), "d"), Err(Error::CacheVersion { .. })));

        assert!(cache_store(&s, dir.path(), "../escape").is_err());
    }
}

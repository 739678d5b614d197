//! File cache for Hurwitz-type evaluations, enabled by `ZLAB_CACHE_DIR`.

use std::path::{Path, PathBuf};

use num_complex::Complex64;

use super::sha256_hex;
use crate::complex::{format_complex, format_real, parse_complex};

pub const CACHE_ENV: &str = "ZLAB_CACHE_DIR";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HurwitzCache {
    dir: PathBuf,
}

impl HurwitzCache {
    pub fn new(dir: impl Into<PathBuf>) -> std::io::Result<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir)?;
        Ok(Self { dir })
    }

    /// `None` when the variable is unset or empty, or the directory cannot
    /// be created.
    pub fn from_env() -> Option<Self> {
        let dir = std::env::var_os(CACHE_ENV).filter(|d| !d.is_empty())?;
        match Self::new(PathBuf::from(dir)) {
            Ok(c) => Some(c),
            Err(e) => {
                log::warn!("{CACHE_ENV} unusable, caching disabled: {e}");
                None
            }
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Digest of `(s, α, B, tol)`.
    pub fn key(s: Complex64, alpha: f64, sequence: &[Complex64], tol: f64) -> String {
        let mut text = format!("s={};alpha={};tol={};b=", format_complex(s), format_real(alpha), format_real(tol));
        for b in sequence {
            text.push_str(&format_complex(*b));
            text.push(',');
        }
        sha256_hex(text.as_bytes())
    }

    pub fn get(&self, key: &str) -> Option<Complex64> {
        let text = std::fs::read_to_string(self.dir.join(key)).ok()?;
        parse_complex(text.trim()).ok()
    }

    pub fn put(&self, key: &str, value: Complex64) {
        let tmp = self.dir.join(format!("{key}.{}.tmp", std::process::id()));
        let done = std::fs::write(&tmp, format_complex(value) + "\n")
            .and_then(|_| std::fs::rename(&tmp, self.dir.join(key)));
        if let Err(e) = done {
            log::warn!("cache write failed: {e}");
        }
    }

    pub fn get_or_insert_with<E>(
        &self,
        key: &str,
        compute: impl FnOnce() -> Result<Complex64, E>,
    ) -> Result<Complex64, E> {
        if let Some(v) = self.get(key) {
            return Ok(v);
        }
        let v = compute()?;
        self.put(key, v);
        Ok(v)
    }
}

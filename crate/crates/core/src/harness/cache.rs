use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dtn::{spectrum, DtnSpectrum};
use crate::error::{Error, Result};
use crate::highprec::{BigReal, Precision};
use crate::profiles::{serialize_piecewise, PiecewiseProfile, ProfileKind};

/// One cached spectrum, stored as JSON with decimal strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumCacheEntry {
    pub key: String,
    pub kind: String,
    pub radius: String,
    pub terms: usize,
    pub precision: u32,
    pub lambdas: Vec<String>,
    pub created_by: String,
}

impl SpectrumCacheEntry {
    pub fn to_spectrum(&self) -> Result<DtnSpectrum> {
        let prec = Precision::new(self.precision)?;
        let kind = ProfileKind::parse(&self.kind)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown kind {:?} in cache entry", self.kind)))?;
        Ok(DtnSpectrum {
            kind,
            radius: BigReal::parse_decimal(&self.radius, prec)?,
            lambdas: self.lambdas.iter().map(|s| BigReal::parse_decimal(s, prec)).collect::<Result<_>>()?,
            precision: prec,
        })
    }
}

/// Outcome of a cache lookup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheStatus {
    Hit,
    Computed,
}

/// Content-addressed spectrum store: one file per key, written by atomic rename.
#[derive(Debug, Clone)]
pub struct SpectrumCache {
    dir: PathBuf,
}

/// SHA-256 over the exact profile text, kind, radius, K and precision.
pub fn cache_key(profile: &PiecewiseProfile, kmax: usize, prec: Precision) -> String {
    let mut h = Sha256::new();
    h.update(serialize_piecewise(profile).as_bytes());
    h.update(b"\0");
    h.update(profile.kind().as_str().as_bytes());
    h.update(b"\0");
    h.update(profile.radius().to_decimal().as_bytes());
    h.update(format!("\0{kmax}\0{}", prec.bits()).as_bytes());
    hex::encode(h.finalize())
}

fn cache_err(path: &Path, source: std::io::Error) -> Error {
    Error::Cache { path: path.display().to_string(), source }
}

impl SpectrumCache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| cache_err(&dir, e))?;
        Ok(SpectrumCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn load(&self, key: &str) -> Result<Option<SpectrumCacheEntry>> {
        let path = self.path_for(key);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(cache_err(&path, e)),
        };
        let entry: SpectrumCacheEntry = serde_json::from_str(&text)
            .map_err(|e| cache_err(&path, std::io::Error::new(std::io::ErrorKind::InvalidData, e)))?;
        Ok((entry.key == key).then_some(entry))
    }

    pub fn store(&self, entry: &SpectrumCacheEntry) -> Result<PathBuf> {
        let path = self.path_for(&entry.key);
        let tmp = self.dir.join(format!(".{}.{}.tmp", entry.key, std::process::id()));
        let text = serde_json::to_string_pretty(entry)
            .map_err(|e| cache_err(&path, std::io::Error::new(std::io::ErrorKind::InvalidData, e)))?;
        let write = || -> std::io::Result<()> {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(text.as_bytes())?;
            f.sync_all()?;
            fs::rename(&tmp, &path)
        };
        write().map_err(|e| {
            let _ = fs::remove_file(&tmp);
            cache_err(&path, e)
        })?;
        Ok(path)
    }

    /// Spectrum of `profile`, from the cache when the exact key is present.
    pub fn spectrum(&self, profile: &PiecewiseProfile, kmax: usize, prec: Precision) -> Result<(DtnSpectrum, CacheStatus)> {
        let key = cache_key(profile, kmax, prec);
        if let Some(entry) = self.load(&key)? {
            return Ok((entry.to_spectrum()?, CacheStatus::Hit));
        }
        let spec = spectrum(profile, kmax, prec)?;
        self.store(&SpectrumCacheEntry {
            key,
            kind: spec.kind.as_str().into(),
            radius: spec.radius.to_decimal(),
            terms: kmax,
            precision: prec.bits(),
            lambdas: spec.lambdas.iter().map(BigReal::to_decimal).collect(),
            created_by: concat!("radial-born ", env!("CARGO_PKG_VERSION")).into(),
        })?;
        Ok((spec, CacheStatus::Computed))
    }
}

/// Spectrum through an optional cache.
pub fn cached_spectrum(
    cache: Option<&SpectrumCache>,
    profile: &PiecewiseProfile,
    kmax: usize,
    prec: Precision,
) -> Result<DtnSpectrum> {
    match cache {
        Some(c) => c.spectrum(profile, kmax, prec).map(|(s, _)| s),
        None => spectrum(profile, kmax, prec),
    }
}

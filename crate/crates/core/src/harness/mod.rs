//! Command implementations behind the `radial-born` binary: spectrum cache, CSV files, experiments.

mod cache;
mod commands;
mod experiments;
mod io;

use std::path::PathBuf;

pub use cache::{cache_key, cached_spectrum, CacheStatus, SpectrumCache, SpectrumCacheEntry};
pub use commands::{
    cmd_born, cmd_dtn, cmd_ensemble, cmd_invert_fourier, cmd_moments, cmd_reconstruct, BornInput, BornOutput,
    EnsembleOptions,
};
pub use experiments::{cmd_experiment, run_experiment, ExperimentConfig, Manifest, ManifestFile, RunKind};
pub use io::{
    fmt_f64, read_fourier_csv, read_spectrum_csv, write_fourier_csv, write_radial_csv, write_rows, write_spectrum_csv,
};

use crate::born::BornMode;
use crate::error::{Error, Result};
use crate::highprec::{BigReal, Precision};
use crate::reconstruct::SolverParams;

pub const ENV_CACHE_DIR: &str = "RADIAL_BORN_CACHE_DIR";
pub const ENV_PRECISION: &str = "RADIAL_BORN_PRECISION";

/// Values given on the command line; `None` falls back to the environment, then to the defaults.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub terms: Option<usize>,
    pub precision: Option<u32>,
    pub grid: Option<usize>,
    pub pieces: Option<usize>,
    pub xi_max: Option<f64>,
    pub cache_dir: Option<PathBuf>,
    pub no_cache: bool,
    pub paper_scale: bool,
}

/// Resolved solver parameters and cache location.
#[derive(Debug, Clone)]
pub struct Settings {
    pub params: SolverParams,
    pub cache_dir: Option<PathBuf>,
}

impl Settings {
    /// Flags win over the environment; the environment wins over desk or paper-scale defaults.
    pub fn resolve(o: &Overrides, env: impl Fn(&str) -> Option<String>) -> Result<Settings> {
        let mut params = if o.paper_scale { SolverParams::paper_scale() } else { SolverParams::default() };
        let bits = match o.precision {
            Some(b) => Some(b),
            None => env(ENV_PRECISION)
                .map(|s| {
                    s.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::InvalidArgument(format!("{ENV_PRECISION}={s:?} is not a bit count")))
                })
                .transpose()?,
        };
        if let Some(b) = bits {
            params.precision = Precision::new(b)?;
        }
        if let Some(k) = o.terms {
            params.terms = k;
        }
        if let Some(n) = o.grid {
            params.grid = n;
        }
        if let Some(m) = o.pieces {
            params.pieces = m;
        }
        if let Some(x) = o.xi_max {
            if !(x > 0.0) {
                return Err(Error::InvalidArgument("--xi-max must be positive".into()));
            }
            params.xi_max = Some(x);
        }
        if params.grid < 2 || params.pieces == 0 {
            return Err(Error::InvalidArgument("grid must be at least 2 and pieces positive".into()));
        }
        let cache_dir = if o.no_cache { None } else { o.cache_dir.clone().or_else(|| env(ENV_CACHE_DIR).map(PathBuf::from)) };
        Ok(Settings { params, cache_dir })
    }

    pub fn from_env(o: &Overrides) -> Result<Settings> {
        Settings::resolve(o, |k| std::env::var(k).ok())
    }

    pub fn cache(&self) -> Result<Option<SpectrumCache>> {
        self.cache_dir.as_ref().map(SpectrumCache::new).transpose()
    }
}

/// `unit`, `finiteR`, `scattering` or `moment-form`; finiteR takes its radius from `radius`.
pub fn parse_mode(name: &str, radius: Option<f64>, prec: Precision) -> Result<BornMode> {
    match name {
        "unit" => Ok(BornMode::Unit),
        "finiteR" | "finite-r" => {
            let r = radius.ok_or_else(|| Error::InvalidArgument("mode finiteR needs --radius".into()))?;
            if !(r > 0.0) || !r.is_finite() {
                return Err(Error::InvalidArgument("--radius must be positive".into()));
            }
            Ok(BornMode::FiniteR(BigReal::from_f64(r, prec)))
        }
        "scattering" => Ok(BornMode::Scattering),
        "moment-form" => Ok(BornMode::MomentForm),
        other => Err(Error::InvalidArgument(format!(
            "unknown mode {other:?} (expected unit, finiteR, scattering or moment-form)"
        ))),
    }
}

use std::fs;
use std::path::{Path, PathBuf};

use super::cache::{CacheStatus, SpectrumCache};
use super::io::{fmt_f64, read_fourier_csv, read_spectrum_csv, write_fourier_csv, write_radial_csv, write_rows, write_spectrum_csv};
use super::Settings;
use crate::born::{eigenvalue_moment_residual, moment_sequence_exact, BornMode};
use crate::dtn::{spectrum, DtnSpectrum};
use crate::error::{Error, Result};
use crate::fourier::{inverse_radial_ft, RadialSamples};
use crate::highprec::BigReal;
use crate::profiles::{parse_profile, PiecewiseProfile, ProfileKind};
use crate::reconstruct::{born_reconstruction, ensemble_depth_profile, iterate_born, BornReconstruction, IterationTrace};

pub(crate) fn load_profile(path: &Path, settings: &Settings) -> Result<PiecewiseProfile> {
    let text = fs::read_to_string(path)?;
    parse_profile(&text, settings.params.precision)?.to_piecewise(settings.params.pieces)
}

pub(crate) fn solve(
    cache: Option<&SpectrumCache>,
    profile: &PiecewiseProfile,
    settings: &Settings,
) -> Result<(DtnSpectrum, CacheStatus)> {
    let p = &settings.params;
    match cache {
        Some(c) => c.spectrum(profile, p.terms, p.precision),
        None => Ok((spectrum(profile, p.terms, p.precision)?, CacheStatus::Computed)),
    }
}

/// Truth profile sampled on the output grid; background beyond R.
pub(crate) fn truth_samples(profile: &PiecewiseProfile, length: f64, n: usize, label: &str) -> RadialSamples {
    let radius = profile.radius().to_f64();
    let bg = profile.kind().background();
    RadialSamples::from_fn(length, n, label, |r| {
        if r <= radius { profile.value_at(r) } else { bg }
    })
}

/// Solves the forward problem for a profile file and writes `spectrum.csv` under `out`.
///
/// With `radius` larger than the profile radius the profile is continued by the background first.
pub fn cmd_dtn(profile_path: &Path, radius: Option<f64>, settings: &Settings, out: &Path) -> Result<(DtnSpectrum, CacheStatus, PathBuf)> {
    let mut profile = load_profile(profile_path, settings)?;
    if let Some(r) = radius {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::InvalidArgument("--radius must be positive".into()));
        }
        profile = profile.extend_with_background(&BigReal::from_f64(r, settings.params.precision))?;
    }
    let cache = settings.cache()?;
    let (spec, status) = solve(cache.as_ref(), &profile, settings)?;
    let path = out.join("spectrum.csv");
    write_spectrum_csv(&path, &spec)?;
    Ok((spec, status, path))
}

/// Where `born` takes its eigenvalues from.
#[derive(Debug, Clone)]
pub enum BornInput {
    Profile(PathBuf),
    Spectrum { path: PathBuf, kind: ProfileKind, radius: f64 },
}

#[derive(Debug, Clone)]
pub struct BornOutput {
    pub reconstruction: BornReconstruction,
    pub fourier_csv: PathBuf,
    pub reconstruction_csv: PathBuf,
}

/// Writes `fourier.csv` (ξ, series value) and `reconstruction.csv` (r, value, in_ball).
pub fn cmd_born(input: &BornInput, mode: &BornMode, settings: &Settings, out: &Path) -> Result<BornOutput> {
    let p = &settings.params;
    let spec = match input {
        BornInput::Profile(path) => {
            let profile = load_profile(path, settings)?;
            let cache = settings.cache()?;
            solve(cache.as_ref(), &profile, settings)?.0
        }
        BornInput::Spectrum { path, kind, radius } => {
            read_spectrum_csv(path, *kind, &BigReal::from_f64(*radius, p.precision), p.precision)?
        }
    };
    if spec.max_degree() > p.terms {
        return cmd_born_spectrum(&spec.truncated(p.terms), mode, settings, out);
    }
    cmd_born_spectrum(&spec, mode, settings, out)
}

fn cmd_born_spectrum(spec: &DtnSpectrum, mode: &BornMode, settings: &Settings, out: &Path) -> Result<BornOutput> {
    let mut rec = born_reconstruction(spec, mode, &settings.params)?;
    rec.samples.label = "value".into();
    let fourier_csv = out.join("fourier.csv");
    let reconstruction_csv = out.join("reconstruction.csv");
    write_fourier_csv(&fourier_csv, &rec.fourier)?;
    write_radial_csv(&reconstruction_csv, &[&rec.samples], rec.radius)?;
    Ok(BornOutput { reconstruction: rec, fourier_csv, reconstruction_csv })
}

/// Inverse radial transform of an `xi,value` file onto [0, π/h_ξ]; writes `inverse.csv`.
pub fn cmd_invert_fourier(fourier_path: &Path, settings: &Settings, out: &Path) -> Result<(RadialSamples, PathBuf)> {
    let f = read_fourier_csv(fourier_path, settings.params.precision)?;
    let n = f.grid.count - 1;
    let length = std::f64::consts::PI / f.grid.spacing.to_f64();
    let mut s = inverse_radial_ft(&f, n, length)?;
    s.label = "value".into();
    let path = out.join("inverse.csv");
    write_rows(&path, &["r", "value"], s.points().map(|(r, v)| vec![fmt_f64(r), fmt_f64(v)]))?;
    Ok((s, path))
}

/// Exact moments σ_k of the perturbation; potentials also get λ_k − k and the residual λ_k − k − σ_k.
pub fn cmd_moments(profile_path: &Path, settings: &Settings, out: &Path) -> Result<PathBuf> {
    let p = &settings.params;
    let profile = load_profile(profile_path, settings)?;
    let sigma = moment_sequence_exact(&profile, p.terms, 3, p.precision)?;
    let path = out.join("moments.csv");
    match profile.kind() {
        ProfileKind::Potential => {
            let cache = settings.cache()?;
            let (spec, _) = solve(cache.as_ref(), &profile, settings)?;
            let residual = eigenvalue_moment_residual(&spec, &profile, p.terms)?;
            let rows = (0..=p.terms).map(|k| {
                vec![
                    k.to_string(),
                    sigma.entries[k].to_decimal(),
                    spec.shift(k).to_decimal(),
                    residual[k].to_decimal(),
                ]
            });
            write_rows(&path, &["k", "sigma", "shift", "residual"], rows)?;
        }
        ProfileKind::Conductivity => {
            let rows = sigma.entries.iter().enumerate().map(|(k, s)| vec![k.to_string(), s.to_decimal()]);
            write_rows(&path, &["k", "sigma"], rows)?;
        }
    }
    Ok(path)
}

pub(crate) fn write_trace(trace: &IterationTrace, truth: &RadialSamples, radius: f64, stem: &Path) -> Result<(PathBuf, PathBuf)> {
    let iterates = stem.with_file_name(format!("{}_iterates.csv", file_stem(stem)));
    let errors = stem.with_file_name(format!("{}_errors.csv", file_stem(stem)));
    let mut cols: Vec<&RadialSamples> = vec![truth];
    cols.extend(trace.iterates.iter());
    write_radial_csv(&iterates, &cols, radius)?;
    let rows = trace.l2_errors.iter().zip(&trace.linf_errors).enumerate().map(|(n, (l2, li))| {
        vec![n.to_string(), fmt_f64(*l2), fmt_f64(*li), fmt_f64(l2.log10()), fmt_f64(li.log10())]
    });
    write_rows(&errors, &["iteration", "l2", "linf", "log10_l2", "log10_linf"], rows)?;
    Ok((iterates, errors))
}

fn file_stem(p: &Path) -> String {
    p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

/// Runs the fixed-point iteration on the spectrum of a profile file; writes iterates and per-iteration errors.
pub fn cmd_reconstruct(profile_path: &Path, iterations: usize, settings: &Settings, out: &Path) -> Result<IterationTrace> {
    let profile = load_profile(profile_path, settings)?;
    let cache = settings.cache()?;
    let (spec, _) = solve(cache.as_ref(), &profile, settings)?;
    let trace = iterate_born(profile.kind(), &spec, &profile, iterations, &settings.params)?;
    let p = &settings.params;
    let truth = truth_samples(&profile, p.length(profile.radius().to_f64()), p.grid, "truth");
    write_trace(&trace, &truth, profile.radius().to_f64(), &out.join("reconstruct"))?;
    Ok(trace)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleOptions {
    pub seed: u64,
    pub samples: usize,
    pub alpha: f64,
    pub basis: usize,
}

impl Default for EnsembleOptions {
    fn default() -> Self {
        EnsembleOptions { seed: 2024, samples: 20, alpha: 1.0, basis: 20 }
    }
}

/// Depth error curve of random cosine-series potentials; writes `depth_error.csv`.
pub fn cmd_ensemble(opts: &EnsembleOptions, settings: &Settings, out: &Path) -> Result<crate::reconstruct::DepthErrorCurve> {
    let curve = ensemble_depth_profile(opts.seed, opts.samples, opts.alpha, opts.basis, &settings.params)?;
    let path = out.join("depth_error.csv");
    write_rows(&path, &["r", "error"], curve.error.points().map(|(r, e)| vec![fmt_f64(r), fmt_f64(e)]))?;
    Ok(curve)
}

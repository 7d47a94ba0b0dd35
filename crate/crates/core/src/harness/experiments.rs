use std::fs;
use std::path::{Path, PathBuf};

use rug::Float;
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::cache::SpectrumCache;
use super::commands::{solve, truth_samples, write_trace};
use super::io::{fmt_f64, write_radial_csv, write_rows};
use super::{parse_mode, Settings};
use crate::born::BornMode;
use crate::error::{Error, Result};
use crate::fourier::forward_radial_ft;
use crate::highprec::{BigReal, Precision};
use crate::profiles::{parse_profile, project_midpoint_with, ParsedProfile, PiecewiseProfile};
use crate::reconstruct::{born_reconstruction, ensemble_depth_profile, iterate_born, SolverParams};

/// What an experiment computes for each case.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunKind {
    /// Born reconstructions in the listed modes.
    Born { modes: Vec<String> },
    /// `finiteR` at every radius in `radii`, plus the scattering limit.
    Radii,
    /// Random cosine-series potentials, one curve per α.
    Ensemble { samples: usize, basis: usize, alphas: Vec<f64> },
    /// The fixed-point iteration.
    Iterate,
}

/// One of the twelve figure reproductions.
///
/// A case is a list of descriptors on the same ball whose perturbations are added.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub id: u32,
    pub title: String,
    pub cases: Vec<Vec<String>>,
    pub run: RunKind,
    pub terms: usize,
    pub precision: u32,
    pub pieces: usize,
    pub grid: usize,
    pub length_factor: f64,
    pub xi_max: f64,
    pub radii: Vec<f64>,
    pub iterations: usize,
    pub seed: u64,
    #[serde(skip)]
    pub out_dir: PathBuf,
}

fn cases(list: &[&[&str]]) -> Vec<Vec<String>> {
    list.iter().map(|c| c.iter().map(|s| s.to_string()).collect()).collect()
}

fn modes(list: &[&str]) -> RunKind {
    RunKind::Born { modes: list.iter().map(|s| s.to_string()).collect() }
}

impl ExperimentConfig {
    pub fn new(id: u32, settings: &Settings, out: &Path) -> Result<Self> {
        let unit = || modes(&["unit"]);
        let (title, cs, run): (&str, Vec<Vec<String>>, RunKind) = match id {
            1 => (
                "step conductivities",
                cases(&[
                    &["step2 kind=conductivity r1=0.5 inner=1.5 outer=1"],
                    &["step2 kind=conductivity r1=0.5 inner=1.2 outer=1"],
                ]),
                unit(),
            ),
            2 => (
                "conductivities that agree on (1/3, 1)",
                cases(&[
                    &["bump kind=conductivity amplitude=0.3 width=1"],
                    &["bump kind=conductivity amplitude=0.3 width=1", "bump kind=conductivity amplitude=0.5 width=0.33333333333333333333"],
                    &["bump kind=conductivity amplitude=0.3 width=1", "bump kind=conductivity amplitude=-0.4 width=0.33333333333333333333"],
                ]),
                unit(),
            ),
            3 => ("scattering limit", cases(&[&["exp3_profile kind=conductivity"]]), modes(&["unit", "scattering"])),
            4 => (
                "smooth conductivities of different sizes",
                cases(&[
                    &["bump kind=conductivity amplitude=0.3 width=1"],
                    &["bump kind=conductivity amplitude=10 width=1"],
                    &["bump kind=conductivity amplitude=-0.999 width=1"],
                ]),
                unit(),
            ),
            5 => (
                "two-step and discontinuous bump potentials",
                cases(&[
                    &["step2 r1=0.5 inner=1 outer=0.5"],
                    &["step2 r1=0.5 inner=10 outer=5"],
                    &["step2 r1=0.5 inner=50 outer=25"],
                    &["step3 r1=0.4 r2=0.7 v1=0 v2=1 v3=0"],
                    &["step3 r1=0.4 r2=0.7 v1=0 v2=10 v3=0"],
                    &["step3 r1=0.4 r2=0.7 v1=0 v2=50 v3=0"],
                ]),
                unit(),
            ),
            6 => (
                "smooth potentials",
                cases(&[&["bump amplitude=1"], &["bump amplitude=10"], &["bump amplitude=30"]]),
                unit(),
            ),
            7 => ("depth dependence of the error", Vec::new(), RunKind::Ensemble { samples: 20, basis: 20, alphas: vec![1.0, 2.0, 3.0] }),
            8 => (
                "potential vanishing near the origin",
                cases(&[&["step3 r1=0.3 r2=0.8 v1=0 v2=5 v3=0"], &["step3 r1=0.3 r2=0.8 v1=0 v2=20 v3=0"]]),
                unit(),
            ),
            9 => ("larger domains and the scattering limit", cases(&[&["bump amplitude=10"]]), RunKind::Radii),
            10 => (
                "negative potentials",
                cases(&[&["bump amplitude=-1"], &["bump amplitude=-5"], &["bump amplitude=-9"]]),
                unit(),
            ),
            11 => (
                "conductivity iteration",
                cases(&[
                    &["tent kind=conductivity amplitude=0.3 width=0.75"],
                    &["bump kind=conductivity amplitude=0.3 width=1"],
                    &["step2 kind=conductivity r1=0.5 inner=1.5 outer=1"],
                ]),
                RunKind::Iterate,
            ),
            12 => (
                "potential iteration",
                cases(&[&["step2 r1=0.5 inner=5 outer=0"], &["bump amplitude=5"]]),
                RunKind::Iterate,
            ),
            other => return Err(Error::InvalidArgument(format!("experiment id must be 1..=12, got {other}"))),
        };
        let p = &settings.params;
        Ok(ExperimentConfig {
            id,
            title: title.into(),
            cases: cs,
            run,
            terms: p.terms,
            precision: p.precision.bits(),
            pieces: p.pieces,
            grid: p.grid,
            length_factor: p.length_factor,
            xi_max: p.xi_cutoff(),
            radii: if id == 9 { vec![1.0, 5.0] } else { vec![1.0] },
            iterations: 10,
            seed: 2024,
            out_dir: out.join(format!("experiment_{id}")),
        })
    }

    pub fn params(&self) -> Result<SolverParams> {
        Ok(SolverParams {
            pieces: self.pieces,
            terms: self.terms,
            precision: Precision::new(self.precision)?,
            grid: self.grid,
            length_factor: self.length_factor,
            xi_max: Some(self.xi_max),
            floor: SolverParams::default().floor,
        })
    }

    fn settings(&self, cache_dir: Option<PathBuf>) -> Result<Settings> {
        Ok(Settings { params: self.params()?, cache_dir })
    }

    /// Parses and projects one case; descriptors are summed as perturbations of the background.
    pub fn case_profile(&self, case: usize) -> Result<PiecewiseProfile> {
        let prec = Precision::new(self.precision)?;
        let parsed = self.cases[case]
            .iter()
            .map(|d| parse_profile(d, prec))
            .collect::<Result<Vec<_>>>()?;
        let first = parsed.first().ok_or_else(|| Error::InvalidArgument("empty case".into()))?;
        if parsed.len() == 1 {
            return first.to_piecewise(self.pieces);
        }
        let kind = first.kind();
        let radius = first.radius().clone();
        let mut analytic = Vec::new();
        for p in &parsed {
            match p {
                ParsedProfile::Analytic(a) if a.kind == kind && a.radius == radius => analytic.push(a.clone()),
                _ => return Err(Error::InvalidArgument("summed descriptors must be analytic, same kind and radius".into())),
            }
        }
        let bg = kind.background();
        project_midpoint_with(kind, &radius, self.pieces, |r| {
            let mut acc = Float::with_val(r.prec(), bg);
            for a in &analytic {
                acc += a.eval(r) - bg;
            }
            acc
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ManifestFile {
    pub name: String,
    pub sha256: String,
}

/// Parameters, code version and checksums of everything an experiment wrote.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub experiment: u32,
    pub version: String,
    pub config: ExperimentConfig,
    pub files: Vec<ManifestFile>,
    pub notes: Vec<String>,
    pub failures: Vec<String>,
}

fn sha256_file(path: &Path) -> Result<String> {
    Ok(hex::encode(Sha256::digest(fs::read(path)?)))
}

fn run_case(
    config: &ExperimentConfig,
    settings: &Settings,
    cache: Option<&SpectrumCache>,
    case: usize,
    notes: &mut Vec<String>,
) -> Result<()> {
    let profile = config.case_profile(case)?;
    let params = &settings.params;
    let dir = &config.out_dir;
    let stem = format!("case{case}");
    let (spec, _) = solve(cache, &profile, settings)?;

    let born_modes: Vec<(String, BornMode)> = match &config.run {
        RunKind::Born { modes } => modes
            .iter()
            .map(|m| parse_mode(m, None, params.precision).map(|b| (m.clone(), b)))
            .collect::<Result<_>>()?,
        RunKind::Radii => {
            let mut v: Vec<(String, BornMode)> = config
                .radii
                .iter()
                .map(|r| (format!("finiteR{r}"), BornMode::FiniteR(BigReal::from_f64(*r, params.precision))))
                .collect();
            v.push(("scattering".into(), BornMode::Scattering));
            v
        }
        RunKind::Iterate => {
            let trace = iterate_born(profile.kind(), &spec, &profile, config.iterations, params)?;
            let truth = truth_samples(&profile, params.length(profile.radius().to_f64()), params.grid, "truth");
            write_trace(&trace, &truth, profile.radius().to_f64(), &dir.join(&stem))?;
            if !trace.converged {
                notes.push(format!("{stem}: L² error rose twice, stopped after iterate {}", trace.iterates.len() - 1));
            }
            return Ok(());
        }
        RunKind::Ensemble { .. } => unreachable!("ensembles have no cases"),
    };

    for (name, mode) in born_modes {
        let rec = born_reconstruction(&spec, &mode, params)?;
        let truth = truth_samples(&profile, params.length(rec.radius), params.grid, "truth");
        write_radial_csv(&dir.join(format!("{stem}_{name}.csv")), &[&truth, &rec.samples], rec.radius)?;
        let exact = forward_radial_ft(&profile, &rec.fourier.grid, 3)?;
        let rows = (0..rec.fourier.values.len()).map(|j| {
            vec![
                rec.fourier.xi(j).to_decimal(),
                exact.values[j].to_decimal(),
                rec.fourier.values[j].to_decimal(),
            ]
        });
        write_rows(&dir.join(format!("{stem}_{name}_fourier.csv")), &["xi", "truth", &rec.fourier.label], rows)?;
    }
    Ok(())
}

/// Runs every case of `config`, writing CSVs and `manifest.json` under `config.out_dir`.
///
/// A failing case is recorded in the manifest; the other cases still run.
pub fn run_experiment(config: &ExperimentConfig, cache_dir: Option<PathBuf>) -> Result<Manifest> {
    let settings = config.settings(cache_dir)?;
    let cache = settings.cache()?;
    fs::create_dir_all(&config.out_dir)?;
    let mut notes = Vec::new();
    let mut failures = Vec::new();

    match &config.run {
        RunKind::Ensemble { samples, basis, alphas } => {
            let mut curves = Vec::new();
            for &alpha in alphas {
                match ensemble_depth_profile(config.seed, *samples, alpha, *basis, &settings.params) {
                    Ok(c) => {
                        notes.push(format!(
                            "alpha {alpha}: {} samples, {} failed, mean error on [0, 0.2] {}, on [0.8, 1] {}",
                            c.sample_count,
                            c.failed,
                            fmt_f64(c.mean_on(0.0, 0.2)),
                            fmt_f64(c.mean_on(0.8, 1.0))
                        ));
                        curves.push(c);
                    }
                    Err(e) => failures.push(format!("alpha {alpha}: {e}")),
                }
            }
            if let Some(first) = curves.first() {
                let mut header = vec!["r".to_string()];
                header.extend(curves.iter().map(|c| format!("e_alpha_{}", c.alpha)));
                let header: Vec<&str> = header.iter().map(String::as_str).collect();
                let rows = (0..first.error.len()).map(|m| {
                    let mut row = vec![fmt_f64(first.error.r(m))];
                    row.extend(curves.iter().map(|c| fmt_f64(c.error.values[m])));
                    row
                });
                write_rows(&config.out_dir.join("depth_error.csv"), &header, rows)?;
            }
        }
        _ => {
            for case in 0..config.cases.len() {
                if let Err(e) = run_case(config, &settings, cache.as_ref(), case, &mut notes) {
                    failures.push(format!("case{case} ({}): {e}", config.cases[case].join(" + ")));
                }
            }
        }
    }

    let mut names: Vec<String> = fs::read_dir(&config.out_dir)?
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".csv"))
        .collect();
    names.sort();
    let files = names
        .into_iter()
        .map(|name| Ok(ManifestFile { sha256: sha256_file(&config.out_dir.join(&name))?, name }))
        .collect::<Result<Vec<_>>>()?;
    let manifest = Manifest {
        experiment: config.id,
        version: env!("CARGO_PKG_VERSION").into(),
        config: config.clone(),
        files,
        notes,
        failures,
    };
    let text = serde_json::to_string_pretty(&manifest)
        .map_err(|e| Error::Io(std::io::Error::new(std::io::ErrorKind::InvalidData, e)))?;
    fs::write(config.out_dir.join("manifest.json"), text + "\n")?;
    Ok(manifest)
}

/// Builds the configuration for `id`, applies overrides and runs it.
pub fn cmd_experiment(
    id: u32,
    settings: &Settings,
    iterations: Option<usize>,
    seed: Option<u64>,
    radius: Option<f64>,
    out: &Path,
) -> Result<Manifest> {
    let mut config = ExperimentConfig::new(id, settings, out)?;
    if let Some(n) = iterations {
        config.iterations = n;
    }
    if let Some(s) = seed {
        config.seed = s;
    }
    if let Some(r) = radius {
        if config.run == RunKind::Radii {
            config.radii = vec![1.0, r];
        }
    }
    run_experiment(&config, settings.cache_dir.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reconstruct::SolverParams;

    fn small() -> Settings {
        Settings {
            params: SolverParams { pieces: 100, terms: 30, precision: Precision::BITS_256, grid: 128, ..SolverParams::default() },
            cache_dir: None,
        }
    }

    #[test]
    fn every_id_has_parseable_profiles() {
        let dir = tempfile::tempdir().unwrap();
        for id in 1..=12 {
            let c = ExperimentConfig::new(id, &small(), dir.path()).unwrap();
            for case in 0..c.cases.len() {
                c.case_profile(case).unwrap();
            }
        }
        assert!(ExperimentConfig::new(0, &small(), dir.path()).is_err());
        assert!(ExperimentConfig::new(13, &small(), dir.path()).is_err());
    }

    #[test]
    fn summed_case_agrees_outside_the_inner_bump() {
        let dir = tempfile::tempdir().unwrap();
        let c = ExperimentConfig::new(2, &small(), dir.path()).unwrap();
        let a = c.case_profile(0).unwrap();
        let b = c.case_profile(1).unwrap();
        for r in [0.4, 0.6, 0.9] {
            assert_eq!(a.value_at(r), b.value_at(r));
        }
        assert!(b.value_at(0.01) > a.value_at(0.01) + 0.4);
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use radial_born::harness::{
    cmd_born, cmd_dtn, cmd_ensemble, cmd_experiment, cmd_invert_fourier, cmd_moments, cmd_reconstruct, parse_mode,
    BornInput, CacheStatus, EnsembleOptions, Overrides, Settings,
};
use radial_born::profiles::ProfileKind;
use radial_born::{Error, Result};

#[derive(Parser)]
#[command(name = "radial-born", version, about = "DtN spectra and Born reconstructions of radial coefficients")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Highest spherical-harmonic degree K
    #[arg(long = "terms", global = true)]
    terms: Option<usize>,
    /// Working precision in bits (env RADIAL_BORN_PRECISION)
    #[arg(long, global = true)]
    precision: Option<u32>,
    #[arg(long = "xi-max", global = true)]
    xi_max: Option<f64>,
    /// Fourier/radial grid intervals N
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Pieces used to project analytic profiles
    #[arg(long, global = true)]
    pieces: Option<usize>,
    /// K = 400, 1024 bits, 10000 pieces
    #[arg(long = "paper-scale", global = true)]
    paper_scale: bool,
    /// Spectrum cache directory (env RADIAL_BORN_CACHE_DIR)
    #[arg(long = "cache-dir", global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long = "no-cache", global = true)]
    no_cache: bool,
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// DtN eigenvalues of a profile file
    Dtn {
        #[arg(long)]
        profile: PathBuf,
        /// Continue the profile by the background out to this radius
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Born approximation from a profile or a spectrum file
    Born {
        #[arg(long, conflicts_with = "spectrum", required_unless_present = "spectrum")]
        profile: Option<PathBuf>,
        #[arg(long, requires = "kind")]
        spectrum: Option<PathBuf>,
        /// potential or conductivity, for --spectrum
        #[arg(long)]
        kind: Option<String>,
        /// Radius of the sphere the spectrum was measured on
        #[arg(long = "spectrum-radius", default_value_t = 1.0)]
        spectrum_radius: f64,
        #[arg(long, default_value = "unit")]
        mode: String,
        /// Ball radius for --mode finiteR
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Inverse radial transform of an xi,value file
    InvertFourier {
        #[arg(long)]
        fourier: PathBuf,
    },
    /// Moments of a profile, and for potentials the eigenvalue residuals
    Moments {
        #[arg(long)]
        profile: PathBuf,
    },
    /// Fixed-point iteration
    Reconstruct {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long, default_value_t = 10)]
        iterations: usize,
    },
    /// Depth error of random potentials
    Ensemble {
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 20)]
        basis: usize,
    },
    /// Reproduce one of the experiments 1..=12
    Experiment {
        id: u32,
        #[arg(long)]
        iterations: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Second radius for experiment 9
        #[arg(long)]
        radius: Option<f64>,
    },
}

fn run(cli: Cli) -> Result<()> {
    let c = &cli.common;
    let settings = Settings::from_env(&Overrides {
        terms: c.terms,
        precision: c.precision,
        grid: c.grid,
        pieces: c.pieces,
        xi_max: c.xi_max,
        cache_dir: c.cache_dir.clone(),
        no_cache: c.no_cache,
        paper_scale: c.paper_scale,
    })?;
    let out = &c.out;
    match cli.command {
        Command::Dtn { profile, radius } => {
            let (_, status, path) = cmd_dtn(&profile, radius, &settings, out)?;
            let how = match status {
                CacheStatus::Hit => "cache hit",
                CacheStatus::Computed => "computed",
            };
            eprintln!("{how}: {}", path.display());
        }
        Command::Born { profile, spectrum, kind, spectrum_radius, mode, radius } => {
            let input = match (profile, spectrum) {
                (Some(p), _) => BornInput::Profile(p),
                (None, Some(s)) => {
                    let k = kind.unwrap_or_default();
                    let kind = ProfileKind::parse(&k)
                        .ok_or_else(|| Error::InvalidArgument(format!("unknown kind {k:?}")))?;
                    BornInput::Spectrum { path: s, kind, radius: spectrum_radius }
                }
                (None, None) => return Err(Error::InvalidArgument("need --profile or --spectrum".into())),
            };
            let mode = parse_mode(&mode, radius, settings.params.precision)?;
            let o = cmd_born(&input, &mode, &settings, out)?;
            eprintln!("wrote {} and {}", o.fourier_csv.display(), o.reconstruction_csv.display());
        }
        Command::InvertFourier { fourier } => {
            let (_, path) = cmd_invert_fourier(&fourier, &settings, out)?;
            eprintln!("wrote {}", path.display());
        }
        Command::Moments { profile } => {
            let path = cmd_moments(&profile, &settings, out)?;
            eprintln!("wrote {}", path.display());
        }
        Command::Reconstruct { profile, iterations } => {
            let trace = cmd_reconstruct(&profile, iterations, &settings, out)?;
            for (n, (l2, li)) in trace.l2_errors.iter().zip(&trace.linf_errors).enumerate() {
                eprintln!("iterate {n}: L2 {l2:.3e}  Linf {li:.3e}");
            }
            if !trace.converged {
                eprintln!("stopped early: L2 error rose twice in a row");
            }
        }
        Command::Ensemble { seed, samples, alpha, basis } => {
            let curve = cmd_ensemble(&EnsembleOptions { seed, samples, alpha, basis }, &settings, out)?;
            eprintln!(
                "{} samples ({} failed); mean error on [0, 0.2] {:.3e}, on [0.8, 1] {:.3e}",
                curve.sample_count,
                curve.failed,
                curve.mean_on(0.0, 0.2),
                curve.mean_on(0.8, 1.0)
            );
        }
        Command::Experiment { id, iterations, seed, radius } => {
            let m = cmd_experiment(id, &settings, iterations, seed, radius, out)?;
            for n in &m.notes {
                eprintln!("{n}");
            }
            for f in &m.failures {
                eprintln!("failed: {f}");
            }
            eprintln!("experiment {id}: {} files", m.files.len());
            if !m.failures.is_empty() {
                return Err(Error::Degenerate(format!("{} case(s) of experiment {id} failed", m.failures.len())));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

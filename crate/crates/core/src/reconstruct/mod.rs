//! Born reconstructions on a radial grid, the fixed-point iteration, and diagnostics.

mod ensemble;
mod iterate;
mod metrics;

use rug::Float;

pub use ensemble::{draw_coefficients, ensemble_depth_profile, DepthErrorCurve};
pub use iterate::{iterate_born, IterationTrace};
pub use metrics::{error_norms, growth_slope, support_radius_estimate};

use crate::born::{born_conductivity_fourier, born_potential_fourier, BornMode, FourierSamples, XiGrid};
use crate::dtn::DtnSpectrum;
use crate::error::{Error, Result};
use crate::fourier::{inverse_radial_ft, RadialSamples};
use crate::highprec::{BigReal, Precision};
use crate::profiles::{project_midpoint_with, PiecewiseProfile, ProfileKind};

/// Resolution settings shared by the pipeline stages.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverParams {
    /// Midpoint-projection pieces for forward solves.
    pub pieces: usize,
    /// Highest degree K.
    pub terms: usize,
    pub precision: Precision,
    /// ξ-grid intervals N (and radial output intervals).
    pub grid: usize,
    /// Inversion domain [0, length_factor·R].
    pub length_factor: f64,
    /// Upper ξ limit; the series is also cut at 0.4 K.
    pub xi_max: Option<f64>,
    /// Lower clamp for conductivity iterates.
    pub floor: f64,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            pieces: 2000,
            terms: 150,
            precision: Precision::BITS_512,
            grid: 512,
            length_factor: 10.0,
            xi_max: None,
            floor: 1e-3,
        }
    }
}

impl SolverParams {
    pub fn paper_scale() -> Self {
        SolverParams {
            pieces: 10_000,
            terms: 400,
            precision: Precision::BITS_1024,
            ..Self::default()
        }
    }

    pub fn length(&self, radius: f64) -> f64 {
        self.length_factor * radius
    }

    pub fn xi_grid(&self, radius: f64) -> Result<XiGrid> {
        XiGrid::for_domain(self.length(radius), self.grid, self.precision)
    }

    /// min(xi_max, 0.4 K): beyond 0.4 K the truncated series is no longer converged.
    pub fn xi_cutoff(&self) -> f64 {
        let k_limit = 0.4 * self.terms as f64;
        self.xi_max.map_or(k_limit, |x| x.min(k_limit))
    }
}

/// Fourier data and radial samples of one Born approximation.
#[derive(Debug, Clone)]
pub struct BornReconstruction {
    pub kind: ProfileKind,
    pub radius: f64,
    /// Series values on the active part of the ξ-grid.
    pub fourier: FourierSamples,
    /// γ_exp or q_exp on [0, L].
    pub samples: RadialSamples,
}

/// Born approximation of the coefficient behind `spec`, sampled on [0, L].
pub fn born_reconstruction(spec: &DtnSpectrum, mode: &BornMode, params: &SolverParams) -> Result<BornReconstruction> {
    let radius = match mode {
        BornMode::FiniteR(r) => r.to_f64(),
        _ => spec.radius.to_f64(),
    };
    let grid = params.xi_grid(radius)?;
    let active = grid.up_to(params.xi_cutoff());
    let fourier = match spec.kind {
        ProfileKind::Potential => born_potential_fourier(spec, &active, mode, 3, params.precision)?,
        ProfileKind::Conductivity => born_conductivity_fourier(spec, &active, mode, 3, params.precision)?,
    };
    let padded = fourier.zero_padded(grid.count);
    let mut samples = inverse_radial_ft(&padded, params.grid, params.length(radius))?;
    if spec.kind == ProfileKind::Conductivity {
        samples.values.iter_mut().for_each(|v| *v += 1.0);
    }
    samples.label = match spec.kind {
        ProfileKind::Potential => format!("q_exp_{}", mode.name()),
        ProfileKind::Conductivity => format!("gamma_exp_{}", mode.name()),
    };
    Ok(BornReconstruction { kind: spec.kind, radius, fourier, samples })
}

/// Linear interpolation of grid samples; constant beyond the last node.
pub fn interpolate(s: &RadialSamples, r: f64) -> f64 {
    let x = r / s.spacing;
    let last = s.values.len() - 1;
    if x <= 0.0 {
        return s.values[0];
    }
    let i = x.floor() as usize;
    if i >= last {
        return s.values[last];
    }
    let t = x - i as f64;
    s.values[i] * (1.0 - t) + s.values[i + 1] * t
}

/// Midpoint projection of grid samples onto m pieces of [0, R]; conductivities are clamped at `floor`.
pub fn project_samples(
    s: &RadialSamples,
    kind: ProfileKind,
    radius: &BigReal,
    m: usize,
    floor: f64,
) -> Result<PiecewiseProfile> {
    let prec = radius.precision().bits();
    project_midpoint_with(kind, radius, m, |r| {
        let mut v = interpolate(s, r.to_f64());
        if kind == ProfileKind::Conductivity {
            v = v.max(floor);
        }
        Float::with_val(prec, v)
    })
}

fn check_params(params: &SolverParams) -> Result<()> {
    if params.pieces == 0 || params.grid < 2 || params.terms == 0 {
        return Err(Error::InvalidArgument("pieces, grid and terms must be positive".into()));
    }
    if !(params.floor > 0.0) {
        return Err(Error::InvalidArgument("conductivity floor must be positive".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dtn::spectrum;

    #[test]
    fn background_reconstructs_background() {
        let params = SolverParams { terms: 40, precision: Precision::BITS_256, grid: 128, ..SolverParams::default() };
        let one = BigReal::from_f64(1.0, params.precision);
        for kind in [ProfileKind::Potential, ProfileKind::Conductivity] {
            let spec = DtnSpectrum::background(kind, &one, 40, params.precision);
            let rec = born_reconstruction(&spec, &BornMode::Unit, &params).unwrap();
            assert!(rec.samples.values.iter().all(|v| *v == kind.background()));
        }
    }

    #[test]
    fn cutoff_rule() {
        let p = SolverParams::default();
        assert_eq!(p.xi_cutoff(), 60.0);
        let p = SolverParams { xi_max: Some(30.0), ..SolverParams::default() };
        assert_eq!(p.xi_cutoff(), 30.0);
        assert_eq!(SolverParams::paper_scale().xi_cutoff(), 160.0);
    }

    #[test]
    fn projection_clamps_conductivity() {
        let s = RadialSamples::from_fn(2.0, 20, "s", |r| 1.0 - r);
        let one = BigReal::from_f64(1.0, Precision::BITS_128);
        let g = project_samples(&s, ProfileKind::Conductivity, &one, 4, 0.2).unwrap();
        let v: Vec<f64> = g.values().iter().map(BigReal::to_f64).collect();
        for (x, y) in v.iter().zip([0.875, 0.625, 0.375, 0.2]) {
            assert!((x - y).abs() < 1e-15, "{v:?}");
        }
        let q = project_samples(&s, ProfileKind::Potential, &one, 4, 0.2).unwrap();
        assert!((q.values()[3].to_f64() - 0.125).abs() < 1e-15);
    }

    #[test]
    fn small_step_reconstruction_is_close() {
        let params = SolverParams { terms: 100, precision: Precision::BITS_256, grid: 256, ..SolverParams::default() };
        let p = params.precision;
        let b = |x| BigReal::from_f64(x, p);
        let q = PiecewiseProfile::step(ProfileKind::Potential, &b(1.0), &b(0.5), &b(0.01), &b(0.0)).unwrap();
        let spec = spectrum(&q, params.terms, p).unwrap();
        let rec = born_reconstruction(&spec, &BornMode::Unit, &params).unwrap();
        let mid = interpolate(&rec.samples, 0.25);
        assert!((mid - 0.01).abs() < 2e-3, "{mid}");
        assert!(interpolate(&rec.samples, 3.0).abs() < 1e-4);
    }
}

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{born_reconstruction, check_params, SolverParams};
use crate::born::BornMode;
use crate::dtn::spectrum;
use crate::error::{Error, Result};
use crate::fourier::RadialSamples;
use crate::highprec::BigReal;
use crate::profiles::{project_midpoint, AnalyticProfile, AnalyticShape, ProfileKind};

/// Mean absolute Born error over an ensemble of random potentials on the unit ball.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthErrorCurve {
    /// e(r) on the nodes of [0, 1].
    pub error: RadialSamples,
    pub sample_count: usize,
    pub failed: usize,
    pub alpha: f64,
}

impl DepthErrorCurve {
    /// Mean of e over the nodes in [a, b].
    pub fn mean_on(&self, a: f64, b: f64) -> f64 {
        let pts: Vec<f64> = self.error.points().filter(|(r, _)| *r >= a && *r <= b).map(|(_, e)| e).collect();
        pts.iter().sum::<f64>() / pts.len().max(1) as f64
    }
}

/// c_j uniform in [−1/j, 1/j], j = 1..=J, scaled to unit ℓ² norm when Σ c_j² > 1.
pub fn draw_coefficients(rng: &mut impl Rng, basis: usize) -> Vec<f64> {
    let mut c: Vec<f64> = (1..=basis)
        .map(|j| {
            let b = 1.0 / j as f64;
            rng.gen_range(-b..=b)
        })
        .collect();
    let norm2: f64 = c.iter().map(|x| x * x).sum();
    if norm2 > 1.0 {
        let s = norm2.sqrt();
        c.iter_mut().for_each(|x| *x /= s);
    }
    c
}

/// e_α(r) = (1/(α N_s)) Σ |α q − (α q)_exp| for q = Σ c_j √2 cos(π(j − ½) r).
///
/// The coefficient draws depend only on the seed, so different α reuse the same potentials.
pub fn ensemble_depth_profile(
    seed: u64,
    samples: usize,
    alpha: f64,
    basis: usize,
    params: &SolverParams,
) -> Result<DepthErrorCurve> {
    check_params(params)?;
    if samples == 0 || !(alpha > 0.0) {
        return Err(Error::InvalidArgument("need at least one sample and α > 0".into()));
    }
    let prec = params.precision;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<Vec<f64>> = (0..samples).map(|_| draw_coefficients(&mut rng, basis)).collect();

    let errors: Vec<Option<Vec<f64>>> = draws
        .par_iter()
        .map(|c| {
            let coefficients = c.iter().map(|x| BigReal::from_f64(alpha * x, prec)).collect();
            let q = AnalyticProfile::new(
                ProfileKind::Potential,
                BigReal::from_f64(1.0, prec),
                AnalyticShape::CosineSeries { coefficients },
            )
            .ok()?;
            let piecewise = project_midpoint(&q, params.pieces).ok()?;
            let spec = spectrum(&piecewise, params.terms, prec).ok()?;
            let rec = born_reconstruction(&spec, &BornMode::Unit, params).ok()?.samples.restricted(1.0);
            Some(rec.points().map(|(r, v)| (q.eval_f64(r) - v).abs()).collect())
        })
        .collect();

    let ok: Vec<&Vec<f64>> = errors.iter().flatten().collect();
    if ok.is_empty() {
        return Err(Error::Degenerate("every ensemble sample failed in the forward solver".into()));
    }
    let n = ok[0].len();
    let scale = 1.0 / (alpha * ok.len() as f64);
    let mean = (0..n).map(|i| ok.iter().map(|e| e[i]).sum::<f64>() * scale).collect();
    let spacing = params.length(1.0) / params.grid as f64;
    Ok(DepthErrorCurve {
        error: RadialSamples::new(spacing, mean, format!("depth_error_alpha_{alpha}"))?,
        sample_count: ok.len(),
        failed: samples - ok.len(),
        alpha,
    })
}

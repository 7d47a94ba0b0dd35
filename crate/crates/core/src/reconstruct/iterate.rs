use super::{born_reconstruction, check_params, project_samples, SolverParams};
use crate::born::BornMode;
use crate::dtn::{spectrum, DtnSpectrum};
use crate::error::{Error, Result};
use crate::fourier::RadialSamples;
use crate::highprec::BigReal;
use crate::profiles::{PiecewiseProfile, ProfileKind};

use super::metrics::error_norms;

#[derive(Debug, Clone)]
pub struct IterationTrace {
    /// Iterate 0 is the Born approximation of the target.
    pub iterates: Vec<RadialSamples>,
    pub l2_errors: Vec<f64>,
    pub linf_errors: Vec<f64>,
    /// False when the L² error rose twice in a row and the loop stopped.
    pub converged: bool,
}

impl IterationTrace {
    pub fn last(&self) -> &RadialSamples {
        self.iterates.last().expect("trace holds at least one iterate")
    }
}

/// Fixed-point iteration x^{n+1} = B(target) + x^n − B(spectrum(project(x^n))).
///
/// B is the Born map on the unit sphere, x^0 = B(target). Errors are measured on [0, R].
pub fn iterate_born(
    kind: ProfileKind,
    target: &DtnSpectrum,
    reference: &PiecewiseProfile,
    n_iter: usize,
    params: &SolverParams,
) -> Result<IterationTrace> {
    check_params(params)?;
    if target.kind != kind || reference.kind() != kind {
        return Err(Error::KindMismatch { expected: kind.as_str(), found: target.kind.as_str() });
    }
    if target.max_degree() < params.terms {
        return Err(Error::InvalidArgument(format!(
            "target spectrum has {} degrees, iteration needs {}",
            target.max_degree(),
            params.terms
        )));
    }
    let target = target.truncated(params.terms);
    let radius = BigReal::from_float(target.radius.as_float().clone());
    let r = radius.to_f64();
    let base = born_reconstruction(&target, &BornMode::Unit, params)?.samples;

    let mut trace = IterationTrace { iterates: Vec::new(), l2_errors: Vec::new(), linf_errors: Vec::new(), converged: true };
    let mut current = base.clone();
    current.label = "iterate_0".into();
    for n in 0..=n_iter {
        let (l2, linf) = error_norms(&current, |x| reference.value_at(x), 0.0, r)?;
        trace.iterates.push(current.clone());
        trace.l2_errors.push(l2);
        trace.linf_errors.push(linf);
        let e = &trace.l2_errors;
        if e.len() >= 3 && e[e.len() - 1] > e[e.len() - 2] && e[e.len() - 2] > e[e.len() - 3] {
            trace.converged = false;
            break;
        }
        if n == n_iter {
            break;
        }
        let profile = project_samples(&current, kind, &radius, params.pieces, params.floor)?;
        let spec = spectrum(&profile, params.terms, params.precision)?;
        let image = born_reconstruction(&spec, &BornMode::Unit, params)?.samples;
        let values = base
            .values
            .iter()
            .zip(&current.values)
            .zip(&image.values)
            .map(|((b, x), y)| b + x - y)
            .collect();
        current = RadialSamples::new(base.spacing, values, format!("iterate_{}", n + 1))?;
    }
    Ok(trace)
}

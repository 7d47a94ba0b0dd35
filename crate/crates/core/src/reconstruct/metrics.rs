use crate::born::{log_abs_series, CoefficientSequence};
use crate::error::{Error, Result};
use crate::fourier::RadialSamples;

/// Trapezoid L² norm and maximum of s − reference over the grid nodes in [a, b].
pub fn error_norms(s: &RadialSamples, reference: impl Fn(f64) -> f64, a: f64, b: f64) -> Result<(f64, f64)> {
    if !(a < b) {
        return Err(Error::InvalidArgument(format!("empty interval [{a}, {b}]")));
    }
    let slack = 1e-12 * s.spacing;
    let pts: Vec<(f64, f64)> = s
        .points()
        .filter(|(r, _)| *r >= a - slack && *r <= b + slack)
        .map(|(r, v)| (r, v - reference(r)))
        .collect();
    if pts.is_empty() {
        return Err(Error::InvalidArgument(format!("no grid nodes in [{a}, {b}]")));
    }
    let linf = pts.iter().fold(0.0f64, |m, (_, e)| m.max(e.abs()));
    let l2sq: f64 = pts.windows(2).map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1.powi(2) + w[1].1.powi(2))).sum();
    Ok((l2sq.sqrt(), linf))
}

/// Radius where |s − background| first drops to τ·max|s − background| or below.
///
/// Every node closer to the origin carries a deviation above the threshold.
pub fn support_radius_estimate(s: &RadialSamples, background: f64, tau: f64) -> Result<f64> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::InvalidArgument(format!("threshold fraction {tau} not in (0, 1)")));
    }
    let dev: Vec<f64> = s.values.iter().map(|v| (v - background).abs()).collect();
    let peak = dev.iter().cloned().fold(0.0, f64::max);
    if peak == 0.0 {
        return Err(Error::Degenerate("samples equal the background everywhere".into()));
    }
    let level = tau * peak;
    let m = dev.iter().position(|d| *d <= level).unwrap_or(dev.len() - 1);
    Ok(s.r(m))
}

/// Least-squares slope of ξ ↦ ln Σ_k |term_k(ξ)| over [a, b] (d = 3).
pub fn growth_slope(mu: &CoefficientSequence, a: f64, b: f64) -> Result<f64> {
    if !(b > a && a > 0.0) {
        return Err(Error::InvalidArgument(format!("need 0 < a < b, got [{a}, {b}]")));
    }
    let n = 101;
    let pts = (0..n)
        .map(|i| {
            let xi = a + (b - a) * i as f64 / (n - 1) as f64;
            log_abs_series(mu, xi, 3).map(|y| (xi, y))
        })
        .collect::<Result<Vec<_>>>()?;
    if pts.iter().any(|(_, y)| !y.is_finite()) {
        return Ok(0.0);
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n as f64;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n as f64;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

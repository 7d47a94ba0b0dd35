use crate::error::{Error, Result};
use crate::profiles::{PiecewiseProfile, ProfileKind};

const START_RADIUS: f64 = 1e-3;
const MAX_STEP: f64 = 1e-4;

/// Second opinion for [`super::potential_spectrum`] in plain f64.
///
/// Integrates w'' = (q(r) + k(k+1)/r²) w outward from a Frobenius start at
/// r = 10⁻³ with a fourth-order Taylor step, renormalizing every step, and
/// returns w'(R)/w(R) − 1/R. Steps never straddle a breakpoint and are
/// shortened near the origin where k(k+1)/r² varies fastest.
pub fn ode_log_derivative_oracle(q: &PiecewiseProfile, k: usize) -> Result<f64> {
    if q.kind() != ProfileKind::Potential {
        return Err(Error::KindMismatch {
            expected: "potential",
            found: q.kind().as_str(),
        });
    }
    let radius = q.radius().to_f64();
    let bps: Vec<f64> = q.breakpoints().iter().map(|b| b.to_f64()).collect();
    let vals: Vec<f64> = q.values().iter().map(|v| v.to_f64()).collect();
    let kk = (k * (k + 1)) as f64;
    let kf = k as f64;

    let r0 = START_RADIUS.min(bps[1] / 2.0);
    let c0 = vals[0];
    let (s, ds) = {
        // w / r^{k+1} and its derivative
        let a1 = c0 / (2.0 * (2.0 * kf + 3.0));
        let a2 = c0 * c0 / (8.0 * (2.0 * kf + 3.0) * (2.0 * kf + 5.0));
        (
            1.0 + a1 * r0 * r0 + a2 * r0.powi(4),
            2.0 * a1 * r0 + 4.0 * a2 * r0.powi(3),
        )
    };
    let mut w = s;
    let mut dw = ((kf + 1.0) * s + r0 * ds) / r0;
    let mut r = r0;
    let mut piece = 0;

    while r < radius {
        while piece + 1 < vals.len() && r >= bps[piece + 1] {
            piece += 1;
        }
        let c = vals[piece];
        let edge = bps[piece + 1];
        let mut h = MAX_STEP.min(0.02 * r / (kf + 1.0));
        if r + h > edge {
            h = edge - r;
        }
        if h <= 0.0 {
            piece += 1;
            continue;
        }
        let p = c + kk / (r * r);
        let p1 = -2.0 * kk / r.powi(3);
        let p2 = 6.0 * kk / r.powi(4);
        let p3 = -24.0 * kk / r.powi(5);
        let d2 = p * w;
        let d3 = p1 * w + p * dw;
        let d4 = p2 * w + 2.0 * p1 * dw + p * d2;
        let d5 = p3 * w + 3.0 * p2 * dw + 3.0 * p1 * d2 + p * d3;
        let (h2, h3, h4) = (h * h / 2.0, h * h * h / 6.0, h.powi(4) / 24.0);
        let nw = w + h * dw + h2 * d2 + h3 * d3 + h4 * d4;
        let ndw = dw + h * d2 + h2 * d3 + h3 * d4 + h4 * d5;
        let scale = nw.abs().max(ndw.abs());
        w = nw / scale;
        dw = ndw / scale;
        r = if r + h >= edge { edge } else { r + h };
    }

    if w.abs() < 1e-8 * dw.abs() {
        return Err(Error::DirichletCollision {
            k,
            w_exp: w.abs().log2().floor() as i64,
            dw_exp: dw.abs().log2().floor() as i64,
        });
    }
    Ok(dw / w - 1.0 / radius)
}

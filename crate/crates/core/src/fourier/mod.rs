//! Radial Fourier transforms in three dimensions.
//!
//! ```text
//! F f(ξ) = (4π/ξ) ∫ r f(r) sin(ξ r) dr,     f(r) = (1/(2π² r)) ∫ ξ F(ξ) sin(r ξ) dξ
//! ```

use rayon::prelude::*;
use rug::float::Constant;
use rug::Float;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::born::{FourierSamples, XiGrid};
use crate::error::{Error, Result};
use crate::highprec::BigReal;
use crate::profiles::PiecewiseProfile;

/// Samples on the uniform grid r_m = m·spacing, m = 0..values.len().
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSamples {
    pub spacing: f64,
    pub values: Vec<f64>,
    pub label: String,
}

impl RadialSamples {
    pub fn new(spacing: f64, values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if !(spacing > 0.0) || values.is_empty() {
            return Err(Error::InvalidArgument("radial samples need positive spacing and at least one node".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("radial samples must be finite".into()));
        }
        Ok(RadialSamples { spacing, values, label: label.into() })
    }

    /// Samples `f` at m = 0..=n on [0, length].
    pub fn from_fn(length: f64, n: usize, label: impl Into<String>, f: impl Fn(f64) -> f64) -> Self {
        let h = length / n as f64;
        RadialSamples {
            spacing: h,
            values: (0..=n).map(|m| f(m as f64 * h)).collect(),
            label: label.into(),
        }
    }

    pub fn r(&self, m: usize) -> f64 {
        m as f64 * self.spacing
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn length(&self) -> f64 {
        self.r(self.values.len() - 1)
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values.iter().enumerate().map(|(m, v)| (self.r(m), *v))
    }

    /// Nodes with r ≤ limit (up to a rounding slack).
    pub fn restricted(&self, limit: f64) -> RadialSamples {
        let n = ((limit / self.spacing) * (1.0 + 1e-12)).floor() as usize + 1;
        RadialSamples {
            spacing: self.spacing,
            values: self.values[..n.min(self.values.len())].to_vec(),
            label: self.label.clone(),
        }
    }

    pub fn map(&self, f: impl Fn(f64, f64) -> f64) -> RadialSamples {
        RadialSamples {
            spacing: self.spacing,
            values: self.points().map(|(r, v)| f(r, v)).collect(),
            label: self.label.clone(),
        }
    }
}

/// Closed-form transform of f − background for a piecewise-constant profile.
///
/// Each piece contributes v [sin(ξr)/ξ² − r cos(ξr)/ξ]_a^b. The ξ = 0 node is 4π ∫ r² f dr.
pub fn forward_radial_ft(f: &PiecewiseProfile, grid: &XiGrid, d: usize) -> Result<FourierSamples> {
    if d != 3 {
        return Err(Error::InvalidArgument(format!("radial transform implemented for d = 3, got {d}")));
    }
    let prec = f.precision();
    let work = prec.bits() + 32;
    // telescoped: Σ_j G(r_j)(v_j − v_{j+1}), v_{m+1} = 0
    let vals = f.perturbation_values();
    let bps = f.breakpoints();
    let jumps: Vec<(Float, Float)> = (0..vals.len())
        .filter_map(|j| {
            let next = vals.get(j + 1).map(|v| v.as_float().clone()).unwrap_or_else(|| Float::new(work));
            let dv = Float::with_val(work, vals[j].as_float() - &next);
            (!dv.is_zero()).then(|| (Float::with_val(work, bps[j + 1].as_float()), dv))
        })
        .collect();
    let four_pi = Float::with_val(work, Constant::Pi) * 4u32;
    let values = (0..grid.count)
        .into_par_iter()
        .map(|j| {
            let xi = Float::with_val(work, grid.spacing.as_float() * j as u32);
            let mut acc = Float::new(work);
            if xi.is_zero() {
                for (r, dv) in &jumps {
                    let r3 = Float::with_val(work, r * r) * r;
                    acc += r3 * dv;
                }
                acc /= 3u32;
                acc *= &four_pi;
            } else {
                let inv = Float::with_val(work, xi.recip_ref());
                for (r, dv) in &jumps {
                    let x = Float::with_val(work, &xi * r);
                    let (s, c) = x.sin_cos(Float::new(work));
                    let mut g = Float::with_val(work, &s * &inv);
                    g -= Float::with_val(work, r * &c);
                    acc += g * dv;
                }
                acc *= &inv;
                acc *= &inv;
                acc *= &four_pi;
            }
            BigReal::with_precision(&acc, prec)
        })
        .collect();
    Ok(FourierSamples {
        grid: grid.clone(),
        values,
        d,
        label: "forward".into(),
    })
}

fn check_grid(f: &FourierSamples, length: f64) -> Result<(f64, usize)> {
    let h = f.grid.spacing.to_f64();
    let expect = std::f64::consts::PI / length;
    if (h - expect).abs() > 1e-12 * expect {
        return Err(Error::GridMismatch(format!("ξ spacing {h} is not π/L = {expect}")));
    }
    if f.values.len() < 2 {
        return Err(Error::GridMismatch("need at least two ξ nodes".into()));
    }
    Ok((h, f.values.len() - 1))
}

fn origin_value(xi_f: &[f64], h: f64) -> f64 {
    let s: f64 = xi_f.iter().enumerate().map(|(j, v)| j as f64 * h * v).sum();
    h * s / (2.0 * std::f64::consts::PI.powi(2))
}

/// ξ_j F_j, rounded to f64.
fn weighted(f: &FourierSamples, h: f64) -> Vec<f64> {
    f.values.iter().enumerate().map(|(j, v)| j as f64 * h * v.to_f64()).collect()
}

/// Inverse transform by the direct sine sum, on r_m = m L / n_out, m = 0..=n_out.
///
/// f(r_m) = h/(2π² r_m) Σ_{j≥1} ξ_j F_j sin(r_m ξ_j), f(0) = h/(2π²) Σ ξ_j² F_j.
pub fn inverse_radial_ft_direct(f: &FourierSamples, n_out: usize, length: f64) -> Result<RadialSamples> {
    let (h, _) = check_grid(f, length)?;
    let wf = weighted(f, h);
    let dr = length / n_out as f64;
    let scale = h / (2.0 * std::f64::consts::PI.powi(2));
    let values = (0..=n_out)
        .into_par_iter()
        .map(|m| {
            if m == 0 {
                return origin_value(&wf, h);
            }
            let r = m as f64 * dr;
            let s: f64 = wf.iter().enumerate().skip(1).map(|(j, v)| v * (r * j as f64 * h).sin()).sum();
            scale * s / r
        })
        .collect();
    RadialSamples::new(dr, values, f.label.clone())
}

/// Inverse transform through a type-I discrete sine transform; output on r_m = m L / N.
pub fn inverse_radial_ft_dst(f: &FourierSamples, length: f64) -> Result<RadialSamples> {
    let (h, n) = check_grid(f, length)?;
    let wf = weighted(f, h);
    // odd extension of length 2N
    let mut buf = vec![Complex::new(0.0, 0.0); 2 * n];
    for j in 1..n {
        buf[j].re = wf[j];
        buf[2 * n - j].re = -wf[j];
    }
    FftPlanner::new().plan_fft_forward(2 * n).process(&mut buf);
    let dr = length / n as f64;
    let scale = h / (2.0 * std::f64::consts::PI.powi(2));
    let mut values: Vec<f64> = (0..=n)
        .map(|m| if m == 0 || m == n { 0.0 } else { scale * (-buf[m].im / 2.0) / (m as f64 * dr) })
        .collect();
    values[0] = origin_value(&wf, h);
    RadialSamples::new(dr, values, f.label.clone())
}

/// Inverse transform on r_m = m L / n_out; uses the sine transform when n_out equals the ξ-grid size.
pub fn inverse_radial_ft(f: &FourierSamples, n_out: usize, length: f64) -> Result<RadialSamples> {
    let (_, n) = check_grid(f, length)?;
    if n_out == n {
        inverse_radial_ft_dst(f, length)
    } else {
        inverse_radial_ft_direct(f, n_out, length)
    }
}

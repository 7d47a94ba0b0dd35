//! The series operator L_d and the Born-approximation Fourier formulas.
//!
//! ```text
//! L_d(μ; ξ) = 2 π^{d/2} Σ_k (−1)^k / (k! Γ(k + d/2)) (ξ/2)^{2k} μ_k
//! ```

mod modes;
mod moments;

use rayon::prelude::*;
use rug::float::Constant;
use rug::{Assign, Float};

pub use modes::{born_conductivity_fourier, born_potential_fourier, BornMode};
pub use moments::{eigenvalue_moment_residual, moment_sequence_exact, moments_from_samples};

use crate::error::{Error, Result};
use crate::highprec::{factorial_gamma_table, BigReal, Precision};

const GUARD_BITS: u32 = 32;

/// What a coefficient sequence holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceMeaning {
    /// λ_k − k (or a weighted variant of it).
    EigenvalueShift,
    /// σ_k[f] = ∫ f_0(r) r^{2k+d−1} dr.
    Moments,
    /// (λ_{k+1} − (k+1)) / (2(k+1)(k+d/2)).
    ShiftedConductivity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSequence {
    pub entries: Vec<BigReal>,
    pub meaning: SequenceMeaning,
}

impl CoefficientSequence {
    pub fn new(entries: Vec<BigReal>, meaning: SequenceMeaning) -> Result<Self> {
        if let Some(k) = entries.iter().position(|e| !e.is_finite()) {
            return Err(Error::InvalidArgument(format!("coefficient {k} is not finite")));
        }
        Ok(CoefficientSequence { entries, meaning })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn precision(&self) -> Precision {
        self.entries.iter().map(BigReal::precision).max().unwrap_or_default()
    }
}

/// Uniform frequency grid ξ_j = j·spacing, j = 0..count.
#[derive(Debug, Clone, PartialEq)]
pub struct XiGrid {
    pub spacing: BigReal,
    pub count: usize,
}

impl XiGrid {
    pub fn new(spacing: BigReal, count: usize) -> Result<Self> {
        if spacing <= 0.0 || count == 0 {
            return Err(Error::InvalidArgument("ξ-grid needs positive spacing and at least one node".into()));
        }
        Ok(XiGrid { spacing, count })
    }

    /// Spacing π/L with N + 1 nodes, matching a sine transform on [0, L].
    pub fn for_domain(length: f64, n: usize, prec: Precision) -> Result<Self> {
        let mut h = Float::with_val(prec.bits(), Constant::Pi);
        h /= length;
        Self::new(BigReal::from_float(h), n + 1)
    }

    pub fn node(&self, j: usize) -> BigReal {
        let mut x = Float::with_val(self.spacing.precision().bits(), self.spacing.as_float());
        x *= j as u32;
        BigReal::from_float(x)
    }

    pub fn max(&self) -> BigReal {
        self.node(self.count - 1)
    }

    /// Same spacing, only the nodes with ξ ≤ xi_max.
    pub fn up_to(&self, xi_max: f64) -> XiGrid {
        let h = self.spacing.to_f64();
        let last = ((xi_max / h) * (1.0 + 1e-12)).floor().max(0.0) as usize;
        XiGrid {
            spacing: self.spacing.clone(),
            count: (last + 1).min(self.count),
        }
    }
}

/// Values of a radial Fourier transform on an [`XiGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSamples {
    pub grid: XiGrid,
    pub values: Vec<BigReal>,
    pub d: usize,
    pub label: String,
}

impl FourierSamples {
    pub fn xi(&self, j: usize) -> BigReal {
        self.grid.node(j)
    }

    pub fn values_f64(&self) -> Vec<f64> {
        self.values.iter().map(BigReal::to_f64).collect()
    }

    /// Extends with zeros to `count` nodes.
    pub fn zero_padded(&self, count: usize) -> FourierSamples {
        let mut out = self.clone();
        if count > out.values.len() {
            let prec = self.values.first().map(BigReal::precision).unwrap_or_default();
            out.values.resize(count, BigReal::zero(prec));
            out.grid.count = count;
        }
        out
    }
}

/// 2 π^{d/2} (−1)^k / (k! Γ(k + d/2)) 4^{−k} for k = 0..=kmax, at `work` bits.
pub(crate) fn series_weights(kmax: usize, d: usize, work: u32) -> Result<Vec<Float>> {
    let table = factorial_gamma_table(kmax, d, Precision::new(work)?)?;
    let mut pi_half_d = Float::with_val(work + 16, Constant::Pi);
    if d % 2 == 0 {
        pi_half_d = Float::with_val(work + 16, pi_half_d.pow_ref_u(d as u32 / 2));
    } else {
        let root = Float::with_val(work + 16, pi_half_d.sqrt_ref());
        pi_half_d = Float::with_val(work + 16, root.pow_ref_u(d as u32));
    }
    pi_half_d <<= 1;
    Ok(table
        .iter()
        .enumerate()
        .map(|(k, fg)| {
            let mut w = Float::with_val(work, &pi_half_d / fg);
            w >>= (2 * k) as i32;
            if k % 2 == 1 {
                w = -w;
            }
            w
        })
        .collect())
}

trait PowU {
    fn pow_ref_u(&self, n: u32) -> Float;
}

impl PowU for Float {
    fn pow_ref_u(&self, n: u32) -> Float {
        use rug::ops::Pow;
        Float::with_val(self.prec(), self.pow(n))
    }
}

/// L_d(μ; ξ) at one frequency.
pub fn eval_series_l(mu: &CoefficientSequence, xi: &BigReal, d: usize, prec: Precision) -> Result<BigReal> {
    if !xi.is_finite() {
        return Err(Error::InvalidArgument("ξ must be finite".into()));
    }
    if *xi < 0.0 {
        return Err(Error::InvalidArgument("ξ must be nonnegative".into()));
    }
    let work = prec.bits() + GUARD_BITS;
    let poly = polynomial(&mu.entries, d, work)?;
    let z = Float::with_val(work, xi.as_float().square_ref());
    Ok(BigReal::with_precision(&horner(&poly, &z), prec))
}

/// Coefficients a_k = weight_k μ_k of L_d as a polynomial in z = ξ².
pub(crate) fn polynomial(mu: &[BigReal], d: usize, work: u32) -> Result<Vec<Float>> {
    if mu.is_empty() {
        return Ok(Vec::new());
    }
    let weights = series_weights(mu.len() - 1, d, work)?;
    Ok(weights
        .into_iter()
        .zip(mu)
        .map(|(w, m)| Float::with_val(work, &w * m.as_float()))
        .collect())
}

pub(crate) fn horner(poly: &[Float], z: &Float) -> Float {
    let work = z.prec();
    let mut acc = Float::new(work);
    for a in poly.iter().rev() {
        acc *= z;
        acc += a;
    }
    acc
}

/// Evaluates Σ a_k ξ^{2k} at every grid node.
pub(crate) fn polynomial_on_grid(poly: &[Float], grid: &XiGrid, prec: Precision, work: u32) -> Vec<BigReal> {
    let h = Float::with_val(work, grid.spacing.as_float());
    (0..grid.count)
        .into_par_iter()
        .map(|j| {
            let mut z = Float::with_val(work, &h * j as u32);
            z.square_mut();
            BigReal::with_precision(&horner(poly, &z), prec)
        })
        .collect()
}

/// L_d(μ; ·) on a whole grid.
pub fn series_on_grid(mu: &CoefficientSequence, grid: &XiGrid, d: usize, prec: Precision) -> Result<FourierSamples> {
    let work = prec.bits() + GUARD_BITS;
    let poly = polynomial(&mu.entries, d, work)?;
    Ok(FourierSamples {
        grid: grid.clone(),
        values: polynomial_on_grid(&poly, grid, prec, work),
        d,
        label: "series".into(),
    })
}

/// Σ_k |term_k(ξ)| of L_d(μ; ξ), in f64 log scale: returns ln Σ|term|.
pub fn log_abs_series(mu: &CoefficientSequence, xi: f64, d: usize) -> Result<f64> {
    let work = mu.precision().bits().max(128) + GUARD_BITS;
    let poly = polynomial(&mu.entries, d, work)?;
    let z = Float::with_val(work, xi * xi);
    let mut acc = Float::new(work);
    let mut zk = Float::with_val(work, 1);
    let mut term = Float::new(work);
    for a in &poly {
        term.assign(a * &zk);
        term.abs_mut();
        acc += &term;
        zk *= &z;
    }
    if acc.is_zero() {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(acc.ln().to_f64())
}

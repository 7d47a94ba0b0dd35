//! Dirichlet-to-Neumann eigenvalues of radial potentials and conductivities.

mod conductivity;
mod oracle;
mod potential;
mod transfer;

use rug::Float;

pub use conductivity::conductivity_spectrum;
pub use oracle::ode_log_derivative_oracle;
pub use potential::potential_spectrum;
pub use transfer::{transfer_radius, transfer_radius_inverse};

use crate::error::{Error, Result};
use crate::highprec::{BigReal, Precision};
use crate::profiles::{PiecewiseProfile, ProfileKind};

/// Default largest degree.
pub const DEFAULT_MAX_DEGREE: usize = 500;

/// Guard bits carried by the forward solvers.
const GUARD_BITS: u32 = 32;

/// Eigenvalues λ_0..=λ_K of the DtN map on the sphere of radius R.
#[derive(Debug, Clone, PartialEq)]
pub struct DtnSpectrum {
    pub kind: ProfileKind,
    pub radius: BigReal,
    pub lambdas: Vec<BigReal>,
    pub precision: Precision,
}

impl DtnSpectrum {
    /// Spectrum of the background coefficient: λ_k = k/R.
    pub fn background(kind: ProfileKind, radius: &BigReal, kmax: usize, prec: Precision) -> Self {
        let lambdas = (0..=kmax)
            .map(|k| {
                let mut v = Float::with_val(prec.bits(), k);
                v /= radius.as_float();
                BigReal::from_float(v)
            })
            .collect();
        DtnSpectrum {
            kind,
            radius: BigReal::with_precision(radius.as_float(), prec),
            lambdas,
            precision: prec,
        }
    }

    pub fn max_degree(&self) -> usize {
        self.lambdas.len().saturating_sub(1)
    }

    pub fn lambda(&self, k: usize) -> &BigReal {
        &self.lambdas[k]
    }

    /// λ_k − k/R.
    pub fn shift(&self, k: usize) -> BigReal {
        let prec = self.precision.bits();
        let mut kr = Float::with_val(prec, k);
        kr /= self.radius.as_float();
        BigReal::from_float(Float::with_val(prec, self.lambdas[k].as_float() - &kr))
    }

    pub fn shifts(&self) -> Vec<BigReal> {
        (0..self.lambdas.len()).map(|k| self.shift(k)).collect()
    }

    /// Keeps degrees 0..=kmax.
    pub fn truncated(&self, kmax: usize) -> DtnSpectrum {
        let mut out = self.clone();
        out.lambdas.truncate(kmax + 1);
        out
    }
}

/// Dispatches on the profile kind.
pub fn spectrum(profile: &PiecewiseProfile, kmax: usize, prec: Precision) -> Result<DtnSpectrum> {
    match profile.kind() {
        ProfileKind::Potential => potential_spectrum(profile, kmax, prec),
        ProfileKind::Conductivity => conductivity_spectrum(profile, kmax, prec),
    }
}

/// Solution value and r-derivative at the current radius, scaled by a power
/// of two so that max(|w|, |w'|) lies in [1, 2).
#[derive(Debug, Clone)]
pub struct TransferState {
    pub w: Float,
    pub wprime: Float,
}

impl TransferState {
    pub fn renormalize(&mut self) {
        let ew = self.w.get_exp();
        let ed = self.wprime.get_exp();
        let top = match (ew, ed) {
            (Some(a), Some(b)) => a.max(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => return,
        };
        // mantissa in [1/2, 1) means max in [2^(e-1), 2^e)
        let shift = top - 1;
        self.w >>= shift;
        self.wprime >>= shift;
    }
}

/// Pieces with equal neighbouring values merged; (outer radius, value) at `work` bits.
fn coalesce(profile: &PiecewiseProfile, work: u32) -> Vec<(Float, Float)> {
    let bps = profile.breakpoints();
    let vals = profile.values();
    let mut out: Vec<(Float, Float)> = Vec::with_capacity(vals.len());
    for (j, v) in vals.iter().enumerate() {
        let r = Float::with_val(work, bps[j + 1].as_float());
        match out.last_mut() {
            Some(last) if last.1 == *v.as_float() => last.0 = r,
            _ => out.push((r, Float::with_val(work, v.as_float()))),
        }
    }
    out
}

/// Contiguous degree ranges, one per worker thread.
fn degree_chunks(kmax: usize) -> Vec<(usize, usize)> {
    let n = rayon::current_num_threads().clamp(1, kmax + 1);
    let size = (kmax + 1).div_ceil(n);
    (0..n)
        .map(|i| (i * size, ((i + 1) * size).min(kmax + 1)))
        .filter(|(lo, hi)| lo < hi)
        .collect()
}

fn check_kind(profile: &PiecewiseProfile, expected: ProfileKind) -> Result<()> {
    if profile.kind() != expected {
        return Err(Error::KindMismatch {
            expected: expected.as_str(),
            found: profile.kind().as_str(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renormalize_puts_max_in_one_two() {
        let mut s = TransferState {
            w: Float::with_val(128, 3.0e40),
            wprime: Float::with_val(128, -7.0e39),
        };
        s.renormalize();
        let m = s.w.clone().abs().max(&s.wprime.clone().abs());
        assert!(m >= 1 && m < 2, "{m}");
        let ratio = s.wprime.to_f64() / s.w.to_f64();
        assert!((ratio + 7.0 / 30.0).abs() < 1e-15);
    }

    #[test]
    fn coalesce_merges_equal_neighbours() {
        let p = PiecewiseProfile::uniform(
            ProfileKind::Potential,
            &BigReal::from_f64(1.0, Precision::BITS_128),
            [1.0, 1.0, 2.0, 2.0, 0.0]
                .iter()
                .map(|v| BigReal::from_f64(*v, Precision::BITS_128))
                .collect(),
        )
        .unwrap();
        let c = coalesce(&p, 128);
        let got: Vec<(f64, f64)> = c.iter().map(|(r, v)| (r.to_f64(), v.to_f64())).collect();
        assert_eq!(got, vec![(0.4, 1.0), (0.8, 2.0), (1.0, 0.0)]);
    }
}

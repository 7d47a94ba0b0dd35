use rug::Float;

use super::{CoefficientSequence, SequenceMeaning, GUARD_BITS};
use crate::dtn::DtnSpectrum;
use crate::error::{Error, Result};
use crate::fourier::RadialSamples;
use crate::highprec::{BigReal, Precision};
use crate::profiles::PiecewiseProfile;

/// σ_k = ∫ f_0(r) r^{2k+d−1} dr for k = 0..=kmax, integrated exactly piece by piece.
///
/// For conductivities f_0 = γ − 1.
pub fn moment_sequence_exact(f: &PiecewiseProfile, kmax: usize, d: usize, prec: Precision) -> Result<CoefficientSequence> {
    if d < 1 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let work = prec.bits() + GUARD_BITS;
    let vals = f.perturbation_values();
    let bps = f.breakpoints();
    // σ_k = (1/(2k+d)) Σ_j r_j^{2k+d} (v_j − v_{j+1})
    let mut terms: Vec<(Float, Float)> = Vec::new();
    for j in 0..vals.len() {
        let next = vals.get(j + 1).map(|v| Float::with_val(work, v.as_float())).unwrap_or_else(|| Float::new(work));
        let dv = Float::with_val(work, vals[j].as_float() - &next);
        if dv.is_zero() {
            continue;
        }
        let r = Float::with_val(work, bps[j + 1].as_float());
        let r2 = Float::with_val(work, r.square_ref());
        let mut rp = Float::with_val(work, 1);
        for _ in 0..d {
            rp *= &r;
        }
        terms.push((rp * dv, r2));
    }
    let mut entries = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax {
        let mut acc = Float::new(work);
        for (t, r2) in terms.iter_mut() {
            acc += &*t;
            *t *= &*r2;
        }
        acc /= (2 * k + d) as u32;
        entries.push(BigReal::with_precision(&acc, prec));
    }
    CoefficientSequence::new(entries, SequenceMeaning::Moments)
}

/// Trapezoid approximation of ∫ s(r) r^{2k+d−1} dr over the sample grid, at 128 bits.
pub fn moments_from_samples(s: &RadialSamples, kmax: usize, d: usize) -> Result<CoefficientSequence> {
    if d < 1 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let work = 128;
    let prec = Precision::BITS_128;
    let n = s.values.len();
    let h = Float::with_val(work, s.spacing);
    // w_m s_m r_m^{d−1}, then multiplied by r_m² per k
    let mut weighted: Vec<Float> = Vec::with_capacity(n);
    let mut r2: Vec<Float> = Vec::with_capacity(n);
    for (m, v) in s.values.iter().enumerate() {
        let r = Float::with_val(work, &h * m as u32);
        let mut t = Float::with_val(work, *v);
        for _ in 0..d - 1 {
            t *= &r;
        }
        if m == 0 || m + 1 == n {
            t >>= 1;
        }
        r2.push(r.square());
        weighted.push(t);
    }
    let mut entries = Vec::with_capacity(kmax + 1);
    for _ in 0..=kmax {
        let mut acc = Float::new(work);
        for (w, q) in weighted.iter_mut().zip(&r2) {
            acc += &*w;
            *w *= q;
        }
        acc *= &h;
        entries.push(BigReal::with_precision(&acc, prec));
    }
    CoefficientSequence::new(entries, SequenceMeaning::Moments)
}

/// λ_k − k − σ_k[q] for k = 0..=kmax (d = 3, unit-normalized shifts).
pub fn eigenvalue_moment_residual(spec: &DtnSpectrum, q: &PiecewiseProfile, kmax: usize) -> Result<Vec<BigReal>> {
    if kmax > spec.max_degree() {
        return Err(Error::InvalidArgument(format!("spectrum stops at k = {}", spec.max_degree())));
    }
    let prec = spec.precision;
    let work = prec.bits() + GUARD_BITS;
    let shifts = super::modes::unit_shifts(&spec.truncated(kmax), 3, work);
    let sigma = moment_sequence_exact(q, kmax, 3, Precision::new(work)?)?;
    Ok(shifts
        .iter()
        .zip(&sigma.entries)
        .map(|(a, b)| BigReal::with_precision(&Float::with_val(work, a - b.as_float()), prec))
        .collect())
}

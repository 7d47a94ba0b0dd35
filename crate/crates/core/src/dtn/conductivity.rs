use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Assign, Float};

use super::{check_kind, coalesce, degree_chunks, DtnSpectrum, GUARD_BITS};
use crate::error::{Error, Result};
use crate::highprec::{BigReal, Precision};
use crate::profiles::{PiecewiseProfile, ProfileKind};

/// DtN eigenvalues of ∇·(γ∇·) on B_R for a radial piecewise-constant γ (d = 3).
///
/// On a piece u = A r^k + B r^{−(k+1)}; u and r γ u' are continuous across
/// interfaces. Returns λ_k = γ(R⁻) u'(R)/u(R), so λ_0 = 0 exactly.
pub fn conductivity_spectrum(g: &PiecewiseProfile, kmax: usize, prec: Precision) -> Result<DtnSpectrum> {
    check_kind(g, ProfileKind::Conductivity)?;
    let work = prec.bits() + GUARD_BITS;
    let pieces = coalesce(g, work);
    let chunks = degree_chunks(kmax);
    let solved: Vec<Vec<(Float, Float)>> = chunks
        .par_iter()
        .map(|&(lo, hi)| propagate(&pieces, lo, hi, work))
        .collect();

    let radius = Float::with_val(work, g.radius().as_float());
    let mut lambdas = Vec::with_capacity(kmax + 1);
    for (k, (u, flux)) in solved.into_iter().flatten().enumerate() {
        if u.is_zero() {
            return Err(Error::VanishingDenominator { k, context: "u(R) = 0".into() });
        }
        let mut lam = Float::with_val(work, &flux / &u);
        lam /= &radius;
        lambdas.push(BigReal::with_precision(&lam, prec));
    }
    Ok(DtnSpectrum {
        kind: ProfileKind::Conductivity,
        radius: BigReal::with_precision(g.radius().as_float(), prec),
        lambdas,
        precision: prec,
    })
}

/// (u, r γ u') at the outer radius for degrees lo..hi.
fn propagate(pieces: &[(Float, Float)], lo: usize, hi: usize, work: u32) -> Vec<(Float, Float)> {
    let gamma0 = &pieces[0].1;
    let mut states: Vec<(Float, Float)> = (lo..hi)
        .map(|k| (Float::with_val(work, 1), Float::with_val(work, gamma0 * k as u32)))
        .collect();
    let mut a = Float::new(work);
    let mut bcoef = Float::new(work);
    let mut ru = Float::new(work);
    let mut tmp = Float::new(work);

    for w in pieces.windows(2) {
        let (ra, _) = &w[0];
        let (rb, gamma) = &w[1];
        let t = Float::with_val(work, rb / ra);
        let inv_t = Float::with_val(work, t.recip_ref());
        let mut tk = Float::with_val(work, (&t).pow(lo as u32));
        // t^{-(k+1)}
        let mut inv_tk1 = Float::with_val(work, tk.recip_ref());
        inv_tk1 *= &inv_t;
        for (i, k) in (lo..hi).enumerate() {
            let kf = k as u32;
            let (u, flux) = &mut states[i];
            // r u' on the new piece, then the (2k+1)-scaled coefficients
            ru.assign(&*flux / gamma);
            a.assign(&*u * (kf + 1));
            a += &ru;
            bcoef.assign(&*u * kf);
            bcoef -= &ru;
            a *= &tk;
            bcoef *= &inv_tk1;
            u.assign(&a + &bcoef);
            tmp.assign(&a * kf);
            bcoef *= kf + 1;
            tmp -= &bcoef;
            flux.assign(&tmp * gamma);
            renormalize(u, flux);
            tk *= &t;
            inv_tk1 *= &inv_t;
        }
    }
    states
}

fn renormalize(u: &mut Float, flux: &mut Float) {
    let top = match (u.get_exp(), flux.get_exp()) {
        (Some(a), Some(b)) => a.max(b),
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => return,
    };
    *u >>= top - 1;
    *flux >>= top - 1;
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: f64) -> BigReal {
        BigReal::from_f64(x, Precision::BITS_256)
    }

    #[test]
    fn unit_conductivity_gives_k_over_r() {
        let p = Precision::BITS_256;
        for r in [1.0, 2.0, 5.0] {
            let g = PiecewiseProfile::uniform(ProfileKind::Conductivity, &b(r), vec![b(1.0); 4]).unwrap();
            let spec = conductivity_spectrum(&g, 10, p).unwrap();
            assert!(spec.lambdas[0].is_zero());
            for k in 0..=10 {
                let expect = BigReal::ratio(k as i64, 1, p) / b(r);
                assert_eq!(spec.lambdas[k], expect);
            }
        }
    }

    #[test]
    fn two_piece_degree_one() {
        let p = Precision::BITS_256;
        let g = PiecewiseProfile::step(ProfileKind::Conductivity, &b(1.0), &b(0.5), &b(2.0), &b(1.0)).unwrap();
        let spec = conductivity_spectrum(&g, 1, p).unwrap();
        let expect = BigReal::ratio(34, 31, p);
        let err = (&spec.lambdas[1] - &expect).abs();
        assert!(err <= expect.ulp(), "{err:?}");
    }

    #[test]
    fn boundary_value_multiplies_the_log_derivative() {
        let p = Precision::BITS_128;
        let g = PiecewiseProfile::constant(ProfileKind::Conductivity, &b(1.0), &b(3.0)).unwrap();
        let spec = conductivity_spectrum(&g, 4, p).unwrap();
        assert_eq!(spec.lambdas[4], 12.0);
    }
}

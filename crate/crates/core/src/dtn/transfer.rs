use rug::ops::Pow;
use rug::Float;

use super::DtnSpectrum;
use crate::error::{Error, Result};
use crate::highprec::BigReal;
use crate::profiles::ProfileKind;

struct Factors {
    /// 2k + d − 2
    n: Float,
    /// R^{−(2k+d−1)}
    a: Float,
    /// R^{−(2k+d−2)}
    b: Float,
}

fn factors(k: usize, d: usize, radius: &Float, work: u32) -> Factors {
    let n = 2 * k + d - 2;
    let inv = Float::with_val(work, radius.recip_ref());
    let b = Float::with_val(work, (&inv).pow(n as u32));
    let a = Float::with_val(work, &b * &inv);
    Factors {
        n: Float::with_val(work, n as u32),
        a,
        b,
    }
}

fn check(spec: &DtnSpectrum, radius: &BigReal, d: usize) -> Result<()> {
    if spec.kind != ProfileKind::Potential {
        return Err(Error::KindMismatch {
            expected: "potential",
            found: spec.kind.as_str(),
        });
    }
    if d < 2 {
        return Err(Error::InvalidArgument(format!("dimension {d} must be at least 2")));
    }
    if *radius < 1.0 {
        return Err(Error::InvalidArgument("target radius must be at least 1".into()));
    }
    Ok(())
}

/// Carries eigenvalues on the unit sphere to the sphere of radius R ≥ 1 for a
/// potential supported in B_1:
///
/// λ_k^R − k/R = R^{−(2k+d−1)} (λ_k − k)(2k+d−2) / (λ_k + k + d − 2 − R^{−(2k+d−2)}(λ_k − k)).
pub fn transfer_radius(spec: &DtnSpectrum, radius: &BigReal, d: usize) -> Result<DtnSpectrum> {
    check(spec, radius, d)?;
    if spec.radius != 1.0 {
        return Err(Error::InvalidArgument("source spectrum must be on the unit sphere".into()));
    }
    let prec = spec.precision;
    let work = prec.bits() + 32;
    let r = Float::with_val(work, radius.as_float());
    let mut lambdas = Vec::with_capacity(spec.lambdas.len());
    for (k, lam) in spec.lambdas.iter().enumerate() {
        let f = factors(k, d, &r, work);
        let delta = Float::with_val(work, lam.as_float() - k as u32);
        // δ + n − b δ
        let mut den = Float::with_val(work, &delta + &f.n);
        den -= Float::with_val(work, &f.b * &delta);
        let mut num = Float::with_val(work, &f.a * &delta);
        num *= &f.n;
        if den.is_zero() {
            if num.is_zero() {
                lambdas.push(background_value(k, &r, prec.bits()));
                continue;
            }
            return Err(Error::VanishingDenominator { k, context: "radius transfer".into() });
        }
        let mut out = Float::with_val(work, &num / &den);
        out += Float::with_val(work, k as u32) / &r;
        lambdas.push(BigReal::with_precision(&out, prec));
    }
    Ok(DtnSpectrum {
        kind: ProfileKind::Potential,
        radius: BigReal::with_precision(radius.as_float(), prec),
        lambdas,
        precision: prec,
    })
}

/// Inverse of [`transfer_radius`]: eigenvalues on B_R back to the unit sphere.
pub fn transfer_radius_inverse(spec: &DtnSpectrum, d: usize) -> Result<DtnSpectrum> {
    let radius = spec.radius.clone();
    check(spec, &radius, d)?;
    let prec = spec.precision;
    let work = prec.bits() + 32;
    let r = Float::with_val(work, radius.as_float());
    let mut lambdas = Vec::with_capacity(spec.lambdas.len());
    for (k, lam) in spec.lambdas.iter().enumerate() {
        let f = factors(k, d, &r, work);
        let kr = Float::with_val(work, k as u32) / &r;
        let big_d = Float::with_val(work, lam.as_float() - &kr);
        // δ = D n / (a n − D (1 − b))
        let mut den = Float::with_val(work, &f.a * &f.n);
        let one_minus_b = Float::with_val(work, 1 - &f.b);
        den -= Float::with_val(work, &big_d * &one_minus_b);
        let num = Float::with_val(work, &big_d * &f.n);
        let delta = if num.is_zero() {
            Float::new(work)
        } else if den.is_zero() {
            return Err(Error::VanishingDenominator { k, context: "inverse radius transfer".into() });
        } else {
            Float::with_val(work, &num / &den)
        };
        let out = delta + k as u32;
        lambdas.push(BigReal::with_precision(&out, prec));
    }
    Ok(DtnSpectrum {
        kind: ProfileKind::Potential,
        radius: BigReal::from_f64(1.0, prec),
        lambdas,
        precision: prec,
    })
}

fn background_value(k: usize, r: &Float, prec: u32) -> BigReal {
    BigReal::from_float(Float::with_val(prec, Float::with_val(prec + 32, k as u32) / r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::highprec::Precision;

    #[test]
    fn background_maps_to_k_over_r() {
        let p = Precision::BITS_256;
        let one = BigReal::from_f64(1.0, p);
        let spec = DtnSpectrum::background(ProfileKind::Potential, &one, 20, p);
        for r in [1.0, 2.0, 5.0] {
            let rr = BigReal::from_f64(r, p);
            let out = transfer_radius(&spec, &rr, 3).unwrap();
            let expect = DtnSpectrum::background(ProfileKind::Potential, &rr, 20, p);
            assert_eq!(out.lambdas, expect.lambdas);
        }
    }

    #[test]
    fn unit_radius_is_identity() {
        let p = Precision::BITS_256;
        let one = BigReal::from_f64(1.0, p);
        let mut spec = DtnSpectrum::background(ProfileKind::Potential, &one, 5, p);
        spec.lambdas[0] = BigReal::parse_decimal("0.31303528549933130363616124693084783", p).unwrap();
        spec.lambdas[3] = BigReal::from_f64(3.25, p);
        let out = transfer_radius(&spec, &one, 3).unwrap();
        for (x, y) in out.lambdas.iter().zip(&spec.lambdas) {
            assert!((x - y).abs() <= y.ulp().abs(), "{x:?} {y:?}");
        }
    }

    #[test]
    fn q_one_to_radius_two() {
        let p = Precision::BITS_256;
        let one = BigReal::from_f64(1.0, p);
        let mut spec = DtnSpectrum::background(ProfileKind::Potential, &one, 0, p);
        spec.lambdas[0] = BigReal::parse_decimal("0.31303528549933130363616124693084783", p).unwrap();
        let out = transfer_radius(&spec, &BigReal::from_f64(2.0, p), 3).unwrap();
        let expect = 0.067667641618306345946999747486242;
        assert!((out.lambdas[0].to_f64() - expect).abs() < 1e-15);
    }
}

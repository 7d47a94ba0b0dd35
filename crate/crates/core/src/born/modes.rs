use rug::ops::Pow;
use rug::Float;

use super::{polynomial, polynomial_on_grid, series_weights, FourierSamples, XiGrid, GUARD_BITS};
use crate::dtn::DtnSpectrum;
use crate::error::{Error, Result};
use crate::highprec::{BigReal, Precision};
use crate::profiles::ProfileKind;

/// Which eigenvalue-to-Fourier formula to use.
#[derive(Debug, Clone, PartialEq)]
pub enum BornMode {
    /// Eigenvalues on the sphere where they were measured.
    Unit,
    /// Unit-sphere eigenvalues carried to a ball of radius R with the nonlinear weight.
    FiniteR(BigReal),
    /// The R → ∞ limit of `FiniteR`.
    Scattering,
    /// Conductivity only: index-shifted series in (λ_{k+1} − (k+1)).
    MomentForm,
}

impl BornMode {
    pub fn name(&self) -> &'static str {
        match self {
            BornMode::Unit => "unit",
            BornMode::FiniteR(_) => "finiteR",
            BornMode::Scattering => "scattering",
            BornMode::MomentForm => "moment-form",
        }
    }
}

/// μ_k = R^{2k+d−1} (λ_k − k/R). At R = 1 this is λ_k − k with no rounding beyond the subtraction.
pub(crate) fn unit_shifts(spec: &DtnSpectrum, d: usize, work: u32) -> Vec<Float> {
    let r = Float::with_val(work, spec.radius.as_float());
    let unit = r == 1;
    spec.lambdas
        .iter()
        .enumerate()
        .map(|(k, lam)| {
            if unit {
                return Float::with_val(work, lam.as_float() - k as u32);
            }
            let mut s = Float::with_val(work, k as u32) / &r;
            s = Float::with_val(work, lam.as_float() - &s);
            s * Float::with_val(work, (&r).pow((2 * k + d - 1) as u32))
        })
        .collect()
}

/// δ n / (n + δ (1 − R^{−n})) with n = 2k + d − 2; `inv_r = None` is the scattering limit.
fn weighted_shifts(spec: &DtnSpectrum, d: usize, inv_r: Option<&Float>, mode: &str, work: u32) -> Result<Vec<Float>> {
    if spec.radius != 1.0 {
        return Err(Error::InvalidArgument(format!(
            "{mode} mode needs the unit-sphere spectrum, got radius {}",
            spec.radius.to_f64()
        )));
    }
    let mut out = Vec::with_capacity(spec.lambdas.len());
    for (k, lam) in spec.lambdas.iter().enumerate() {
        let n = (2 * k + d - 2) as u32;
        let delta = Float::with_val(work, lam.as_float() - k as u32);
        if delta.is_zero() {
            out.push(delta);
            continue;
        }
        let one_minus_b = match inv_r {
            Some(ir) => 1 - Float::with_val(work, ir.pow(n)),
            None => Float::with_val(work, 1),
        };
        let mut den = Float::with_val(work, &delta * &one_minus_b);
        den += n;
        if den.is_zero() {
            return Err(Error::VanishingDenominator { k, context: format!("{mode} weight") });
        }
        // weight first, so that R = 1 gives exactly δ
        let weight = Float::with_val(work, n) / den;
        out.push(delta * weight);
    }
    Ok(out)
}

fn shifts_for(spec: &DtnSpectrum, mode: &BornMode, d: usize, work: u32) -> Result<Vec<Float>> {
    match mode {
        BornMode::Unit | BornMode::MomentForm => Ok(unit_shifts(spec, d, work)),
        BornMode::FiniteR(r) => {
            if *r < 1.0 {
                return Err(Error::InvalidArgument("finiteR radius must be at least 1".into()));
            }
            let inv = Float::with_val(work, r.as_float().recip_ref());
            weighted_shifts(spec, d, Some(&inv), "finiteR", work)
        }
        BornMode::Scattering => weighted_shifts(spec, d, None, "scattering", work),
    }
}

fn as_big(v: Vec<Float>, prec: Precision) -> Vec<BigReal> {
    v.into_iter().map(|f| BigReal::with_precision(&f, prec)).collect()
}

fn check_kind(spec: &DtnSpectrum, kind: ProfileKind) -> Result<()> {
    if spec.kind != kind {
        return Err(Error::KindMismatch { expected: kind.as_str(), found: spec.kind.as_str() });
    }
    Ok(())
}

/// Fourier transform of the Born approximation of a potential, on `grid`.
pub fn born_potential_fourier(
    spec: &DtnSpectrum,
    grid: &XiGrid,
    mode: &BornMode,
    d: usize,
    prec: Precision,
) -> Result<FourierSamples> {
    check_kind(spec, ProfileKind::Potential)?;
    if *mode == BornMode::MomentForm {
        return Err(Error::InvalidArgument("moment-form applies to conductivities only".into()));
    }
    let work = prec.bits() + GUARD_BITS;
    let mu = as_big(shifts_for(spec, mode, d, work)?, Precision::new(work)?);
    let poly = polynomial(&mu, d, work)?;
    Ok(FourierSamples {
        grid: grid.clone(),
        values: polynomial_on_grid(&poly, grid, prec, work),
        d,
        label: format!("born_q_{}", mode.name()),
    })
}

/// Fourier transform of γ_exp − 1 for a conductivity spectrum, on `grid`.
///
/// Unit, finiteR and scattering modes evaluate
/// −π^{d/2} Σ_{k≥1} (−1)^k / (k! Γ(k+d/2)) (ξ/2)^{2k−2} μ_k
/// as a polynomial in ξ², so ξ = 0 is the k = 1 term. λ_0 is not used.
pub fn born_conductivity_fourier(
    spec: &DtnSpectrum,
    grid: &XiGrid,
    mode: &BornMode,
    d: usize,
    prec: Precision,
) -> Result<FourierSamples> {
    check_kind(spec, ProfileKind::Conductivity)?;
    let work = prec.bits() + GUARD_BITS;
    let mu = shifts_for(spec, mode, d, work)?;
    let poly = if *mode == BornMode::MomentForm {
        let shifted: Vec<BigReal> = mu
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k1, m)| {
                let k = (k1 - 1) as u32;
                // 2(k+1)(k+d/2) = (k+1)(2k+d)
                let den = (k + 1) * (2 * k + d as u32);
                BigReal::from_float(Float::with_val(work, m / den))
            })
            .collect();
        polynomial(&shifted, d, work)?
    } else {
        // a_j = −2 c_{j+1} μ_{j+1}, with c_k the L_d weights in ξ²
        let weights = series_weights(mu.len().saturating_sub(1), d, work)?;
        weights
            .iter()
            .zip(&mu)
            .skip(1)
            .map(|(c, m)| {
                let mut a = Float::with_val(work, c * m);
                a *= -2;
                a
            })
            .collect()
    };
    Ok(FourierSamples {
        grid: grid.clone(),
        values: polynomial_on_grid(&poly, grid, prec, work),
        d,
        label: format!("born_gamma_{}", mode.name()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::born::{eval_series_l, CoefficientSequence, SequenceMeaning};

    const P: Precision = Precision::BITS_256;

    fn spectrum(kind: ProfileKind, lambdas: Vec<BigReal>) -> DtnSpectrum {
        DtnSpectrum { kind, radius: BigReal::from_f64(1.0, P), lambdas, precision: P }
    }

    fn grid() -> XiGrid {
        XiGrid::for_domain(10.0, 40, P).unwrap()
    }

    #[test]
    fn background_gives_zero_in_every_mode() {
        let q = DtnSpectrum::background(ProfileKind::Potential, &BigReal::from_f64(1.0, P), 30, P);
        let g = DtnSpectrum::background(ProfileKind::Conductivity, &BigReal::from_f64(1.0, P), 30, P);
        let modes = [BornMode::Unit, BornMode::FiniteR(BigReal::from_f64(2.0, P)), BornMode::Scattering];
        for m in &modes {
            let f = born_potential_fourier(&q, &grid(), m, 3, P).unwrap();
            assert!(f.values.iter().all(BigReal::is_zero));
            let f = born_conductivity_fourier(&g, &grid(), m, 3, P).unwrap();
            assert!(f.values.iter().all(BigReal::is_zero));
        }
        let f = born_conductivity_fourier(&g, &grid(), &BornMode::MomentForm, 3, P).unwrap();
        assert!(f.values.iter().all(BigReal::is_zero));
    }

    #[test]
    fn scattering_at_origin() {
        let lam0 = BigReal::parse_decimal("0.31303528549933130363616124693084783", P).unwrap();
        let spec = spectrum(ProfileKind::Potential, vec![lam0]);
        let f = born_potential_fourier(&spec, &grid(), &BornMode::Scattering, 3, P).unwrap();
        let expect = 2.9958961928889719572632488047213;
        assert!((f.values[0].to_f64() - expect).abs() < 1e-14);
    }

    #[test]
    fn finite_r_at_one_is_unit_bitwise() {
        let lams = (0..25).map(|k| BigReal::from_f64(k as f64 + 0.3 / (k + 1) as f64, P)).collect();
        let spec = spectrum(ProfileKind::Potential, lams);
        let unit = born_potential_fourier(&spec, &grid(), &BornMode::Unit, 3, P).unwrap();
        let one = BornMode::FiniteR(BigReal::from_f64(1.0, P));
        let fin = born_potential_fourier(&spec, &grid(), &one, 3, P).unwrap();
        assert_eq!(unit.values, fin.values);
    }

    #[test]
    fn two_piece_conductivity_at_origin() {
        let p = P;
        let mut lams = vec![BigReal::zero(p), BigReal::ratio(34, 31, p)];
        lams.extend((2..10).map(|k| BigReal::from_i64(k, p)));
        let spec = spectrum(ProfileKind::Conductivity, lams);
        let expect = 4.0 * std::f64::consts::PI / 31.0;
        for mode in [BornMode::Unit, BornMode::MomentForm] {
            let f = born_conductivity_fourier(&spec, &grid(), &mode, 3, p).unwrap();
            assert!((f.values[0].to_f64() - expect).abs() < 1e-15, "{mode:?}");
        }
    }

    #[test]
    fn moment_form_equals_unit_form() {
        let lams: Vec<BigReal> = (0..60)
            .map(|k| if k == 0 { BigReal::zero(P) } else { BigReal::from_f64(k as f64 + 0.5f64.powi(k), P) })
            .collect();
        let spec = spectrum(ProfileKind::Conductivity, lams);
        let a = born_conductivity_fourier(&spec, &grid(), &BornMode::Unit, 3, P).unwrap();
        let b = born_conductivity_fourier(&spec, &grid(), &BornMode::MomentForm, 3, P).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            let tol = x.abs().to_f64().max(1e-300) * 2f64.powi(-128);
            assert!((x - y).abs().to_f64() <= tol);
        }
    }

    #[test]
    fn conductivity_series_is_potential_series_over_xi_squared() {
        let lams: Vec<BigReal> = (0..40)
            .map(|k| if k == 0 { BigReal::zero(P) } else { BigReal::from_f64(k as f64 + 0.3f64.powi(k), P) })
            .collect();
        let pot = CoefficientSequence::new(
            lams.iter().enumerate().map(|(k, l)| l - &BigReal::from_i64(k as i64, P)).collect(),
            SequenceMeaning::EigenvalueShift,
        )
        .unwrap();
        let spec = spectrum(ProfileKind::Conductivity, lams);
        let g = grid();
        let cond = born_conductivity_fourier(&spec, &g, &BornMode::Unit, 3, P).unwrap();
        for j in 1..g.count {
            let xi = g.node(j);
            let l = eval_series_l(&pot, &xi, 3, P).unwrap();
            let expect = BigReal::from_f64(-2.0, P) * l / (&xi * &xi);
            let err = (&expect - &cond.values[j]).abs().to_f64();
            assert!(err <= expect.abs().to_f64() * 2f64.powi(-128) + 1e-70, "j = {j}");
        }
    }

    #[test]
    fn kind_and_mode_checks() {
        let q = DtnSpectrum::background(ProfileKind::Potential, &BigReal::from_f64(1.0, P), 3, P);
        assert!(matches!(
            born_conductivity_fourier(&q, &grid(), &BornMode::Unit, 3, P),
            Err(Error::KindMismatch { .. })
        ));
        assert!(born_potential_fourier(&q, &grid(), &BornMode::MomentForm, 3, P).is_err());
        let mut on_two = q.clone();
        on_two.radius = BigReal::from_f64(2.0, P);
        assert!(born_potential_fourier(&on_two, &grid(), &BornMode::Scattering, 3, P).is_err());
    }

    #[test]
    fn vanishing_weight_is_reported() {
        // δ_0 = −1 makes 1 + δ_0 = 0 in the scattering weight
        let spec = spectrum(ProfileKind::Potential, vec![BigReal::from_f64(-1.0, P)]);
        let err = born_potential_fourier(&spec, &grid(), &BornMode::Scattering, 3, P).unwrap_err();
        assert!(matches!(err, Error::VanishingDenominator { k: 0, .. }));
    }
}

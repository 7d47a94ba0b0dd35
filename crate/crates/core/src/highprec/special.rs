//! Gamma at half-integer shifts and spherical Bessel functions at
//! arbitrary precision.
//!
//! Conventions (x > 0):
//!
//! ```text
//! i_k(x) = sqrt(pi / 2x) I_{k+1/2}(x)       i_0 = sinh x / x
//! k_k(x) = sqrt(2 / pi x) K_{k+1/2}(x)      k_0 = e^{-x} / x
//! j_k(x) = sqrt(pi / 2x) J_{k+1/2}(x)       j_0 = sin x / x
//! y_k(x) = sqrt(pi / 2x) Y_{k+1/2}(x)       y_0 = -cos x / x
//! ```
//!
//! With these, `i_k k_k' - i_k' k_k = -1/x^2` and `j_k y_k' - j_k' y_k = 1/x^2`.
//! First-kind functions come from their power series at the top order and
//! are carried downward; second-kind functions are carried upward from
//! their closed forms. Both directions are the stable ones.

use rug::float::Constant;
use rug::{Assign, Float};

use super::{BigReal, Precision};
use crate::error::{Error, Result};

/// Extra bits carried by every routine in this module before the final rounding.
const GUARD_BITS: u32 = 32;

/// Γ(k + d/2) by upward recurrence from Γ(1/2) = √π (d odd) or Γ(1) = 1 (d even).
pub fn gamma_half_integer(k: usize, d: usize, prec: Precision) -> Result<BigReal> {
    if d < 3 {
        return Err(Error::InvalidArgument(format!("dimension d = {d} must be at least 3")));
    }
    let work = prec.bits() + GUARD_BITS + 16;
    let (mut value, mut twice_arg) = if d % 2 == 1 {
        (Float::with_val(work, Constant::Pi).sqrt(), 1usize)
    } else {
        (Float::with_val(work, 1), 2usize)
    };
    // Γ(a + 1) = a Γ(a), with a = twice_arg / 2.
    let target = 2 * k + d;
    while twice_arg < target {
        value *= twice_arg as u32;
        value >>= 1;
        twice_arg += 2;
    }
    Ok(BigReal::with_precision(&value, prec))
}

/// Table of k! Γ(k + d/2) for k = 0..=kmax at precision `prec`.
pub fn factorial_gamma_table(kmax: usize, d: usize, prec: Precision) -> Result<Vec<Float>> {
    if d < 3 {
        return Err(Error::InvalidArgument(format!("dimension d = {d} must be at least 3")));
    }
    let work = prec.bits() + GUARD_BITS + 16;
    let mut gamma = gamma_half_integer(0, d, Precision::new(work)?)?.into_float();
    let mut factorial = Float::with_val(work, 1);
    let mut out = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax {
        if k > 0 {
            factorial *= k as u32;
            // Γ(k + d/2) = (k - 1 + d/2) Γ(k - 1 + d/2)
            gamma *= (2 * (k - 1) + d) as u32;
            gamma >>= 1;
        }
        let prod = Float::with_val(work, &factorial * &gamma);
        out.push(Float::with_val(prec.bits(), &prod));
    }
    Ok(out)
}

fn check_positive(x: &BigReal, what: &str) -> Result<()> {
    if !x.is_finite() || *x <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "{what} requires a positive finite argument, got {}",
            x.to_f64()
        )));
    }
    Ok(())
}

/// Power series of the first-kind function of order `n`:
/// x^n / (2n+1)!! Σ_m (±x²/2)^m / (m! (2n+3)(2n+5)…(2n+2m+1)).
///
/// `alternating` selects j_n (true) or i_n (false). Evaluated at `work` bits and
/// stopped once a term drops below 2^-(work+16) of the partial sum.
fn first_kind_series(n: usize, x: &Float, alternating: bool, work: u32) -> Float {
    let mut lead = Float::with_val(work, 1);
    for j in 1..=n {
        lead *= x;
        lead /= (2 * j + 1) as u32;
    }
    let mut half_x2 = Float::with_val(work, x * x);
    half_x2 >>= 1;
    if alternating {
        half_x2 = -half_x2;
    }
    let mut term = Float::with_val(work, 1);
    let mut sum = Float::with_val(work, 1);
    let stop = -(work as i32) - 16;
    let mut m: u64 = 0;
    loop {
        m += 1;
        term *= &half_x2;
        term /= m * (2 * n as u64 + 2 * m + 1);
        sum += &term;
        if term.is_zero() {
            break;
        }
        let te = term.get_exp().unwrap_or(i32::MIN);
        let se = sum.get_exp().unwrap_or(i32::MIN);
        // Terms decrease monotonically once m(2n+2m+1) > x²/2.
        if te - se < stop && half_x2.to_f64().abs() < (m * (2 * n as u64 + 2 * m + 1)) as f64 {
            break;
        }
    }
    sum * lead
}

/// Guard bits that absorb the cancellation of the alternating series (terms up to ~e^x).
fn oscillatory_guard(x: &Float) -> u32 {
    let xf = x.to_f64();
    GUARD_BITS + (xf * std::f64::consts::LOG2_E).ceil().max(0.0) as u32
}

/// (i_k(x), i_k'(x)) for x > 0.
pub fn mod_sph_bessel_pair(k: usize, x: &BigReal) -> Result<(BigReal, BigReal)> {
    check_positive(x, "mod_sph_bessel_pair")?;
    let prec = x.precision();
    let work = prec.bits() + GUARD_BITS;
    let xw = Float::with_val(work, x.as_float());
    let ik = first_kind_series(k, &xw, false, work);
    let ik1 = first_kind_series(k + 1, &xw, false, work);
    // i_k' = i_{k+1} + (k/x) i_k
    let mut deriv = Float::with_val(work, &ik * (k as u32));
    deriv /= &xw;
    deriv += &ik1;
    Ok((BigReal::with_precision(&ik, prec), BigReal::with_precision(&deriv, prec)))
}

/// (j_k(x), j_k'(x), y_k(x), y_k'(x)) for x > 0.
pub fn sph_bessel_pair(k: usize, x: &BigReal) -> Result<(BigReal, BigReal, BigReal, BigReal)> {
    if x.is_zero() {
        return Err(Error::Singular("y_k is singular at x = 0".into()));
    }
    check_positive(x, "sph_bessel_pair")?;
    let prec = x.precision();
    let xw0 = Float::with_val(prec.bits() + GUARD_BITS, x.as_float());
    let work = prec.bits() + oscillatory_guard(&xw0);
    let xw = Float::with_val(work, x.as_float());
    let jk = first_kind_series(k, &xw, true, work);
    let jk1 = first_kind_series(k + 1, &xw, true, work);

    let mut ys = Vec::with_capacity(k + 2);
    spherical_second_kind_upward(&xw, k + 1, work, &mut ys);

    // j_k' = (k/x) j_k - j_{k+1}, y_k' = (k/x) y_k - y_{k+1}
    let k_over_x = Float::with_val(work, k as u32) / &xw;
    let dj = Float::with_val(work, &k_over_x * &jk) - &jk1;
    let dy = Float::with_val(work, &k_over_x * &ys[k]) - &ys[k + 1];
    Ok((
        BigReal::with_precision(&jk, prec),
        BigReal::with_precision(&dj, prec),
        BigReal::with_precision(&ys[k], prec),
        BigReal::with_precision(&dy, prec),
    ))
}

/// y_0..=y_top by upward recurrence y_{n+1} = (2n+1)/x y_n - y_{n-1}.
fn spherical_second_kind_upward(x: &Float, top: usize, work: u32, out: &mut Vec<Float>) {
    out.clear();
    let (sin, cos) = Float::with_val(work, x).sin_cos(Float::new(work));
    let inv_x = Float::with_val(work, x.recip_ref());
    let y0 = -Float::with_val(work, &cos * &inv_x);
    out.push(y0);
    if top == 0 {
        return;
    }
    // y_1 = -cos x / x² - sin x / x
    let y1 = (Float::with_val(work, &out[0] - &sin)) * &inv_x;
    out.push(y1);
    for n in 1..top {
        let mut next = Float::with_val(work, &out[n] * &inv_x);
        next *= (2 * n + 1) as u32;
        next -= &out[n - 1];
        out.push(next);
    }
}

/// Which family of radial solutions a table holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselFamily {
    /// i_k (first) and k_k (second).
    Modified,
    /// j_k (first) and y_k (second).
    Spherical,
}

/// Values of the first and second kind at one argument for every order
/// 0..=kmax+1. Buffers are reused between fills.
#[derive(Debug, Clone)]
pub struct BesselOrders {
    pub family: BesselFamily,
    pub first: Vec<Float>,
    pub second: Vec<Float>,
}

impl BesselOrders {
    pub fn new(family: BesselFamily) -> Self {
        BesselOrders {
            family,
            first: Vec::new(),
            second: Vec::new(),
        }
    }

    /// Fills orders 0..=kmax+1 at x > 0 with `work` bits.
    pub fn fill(&mut self, family: BesselFamily, x: &Float, kmax: usize, work: u32) {
        self.family = family;
        let top = kmax + 1;
        let inv_x = Float::with_val(work, x.recip_ref());

        // First kind: series at the two highest orders, then downward.
        let (series_work, alternating) = match family {
            BesselFamily::Modified => (work, false),
            BesselFamily::Spherical => (work + oscillatory_guard(x), true),
        };
        let xs = Float::with_val(series_work, x);
        let hi = first_kind_series(top, &xs, alternating, series_work);
        let hi_prev = if top > 0 {
            Some(first_kind_series(top - 1, &xs, alternating, series_work))
        } else {
            None
        };
        resize(&mut self.first, top + 1, work);
        self.first[top].assign(&hi);
        if let Some(prev) = hi_prev {
            self.first[top - 1].assign(&prev);
        }
        for n in (1..top).rev() {
            // i_{n-1} = i_{n+1} + (2n+1)/x i_n ; j_{n-1} = (2n+1)/x j_n - j_{n+1}
            let mut v = Float::with_val(work, &self.first[n] * &inv_x);
            v *= (2 * n + 1) as u32;
            match family {
                BesselFamily::Modified => v += &self.first[n + 1],
                BesselFamily::Spherical => v -= &self.first[n + 1],
            }
            self.first[n - 1] = v;
        }

        // Second kind: closed forms at orders 0, 1, then upward.
        match family {
            BesselFamily::Modified => {
                resize(&mut self.second, top + 1, work);
                let mut e = Float::with_val(work, -x);
                e.exp_mut();
                let k0 = Float::with_val(work, &e * &inv_x);
                self.second[0].assign(&k0);
                if top >= 1 {
                    // k_1 = e^{-x} (1/x + 1/x²)
                    let k1 = Float::with_val(work, &k0 + Float::with_val(work, &k0 * &inv_x));
                    self.second[1].assign(&k1);
                }
                for n in 1..top {
                    // k_{n+1} = k_{n-1} + (2n+1)/x k_n
                    let mut v = Float::with_val(work, &self.second[n] * &inv_x);
                    v *= (2 * n + 1) as u32;
                    v += &self.second[n - 1];
                    self.second[n + 1] = v;
                }
            }
            BesselFamily::Spherical => {
                spherical_second_kind_upward(x, top, work, &mut self.second);
            }
        }
    }
}

fn resize(v: &mut Vec<Float>, len: usize, work: u32) {
    if v.len() != len || v.first().map(|f| f.prec()) != Some(work) {
        v.clear();
        v.resize_with(len, || Float::new(work));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(bits: u32) -> Precision {
        Precision::new(bits).unwrap()
    }

    fn close(a: &BigReal, b: f64, tol: f64) -> bool {
        (a.to_f64() - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn gamma_small_cases() {
        let prec = p(256);
        let g0 = gamma_half_integer(0, 3, prec).unwrap();
        let half_sqrt_pi = BigReal::sqrt_pi(prec) / BigReal::from_i64(2, prec);
        assert!((&g0 - &half_sqrt_pi).abs() <= g0.ulp());
        assert!(close(&g0, 0.886_226_925_452_758, 1e-15));

        let g1 = gamma_half_integer(1, 3, prec).unwrap();
        let three_q = BigReal::sqrt_pi(prec) * BigReal::ratio(3, 4, prec);
        assert!((&g1 - &three_q).abs() <= g1.ulp());

        // d even: Γ(k + 2) = (k + 1)!
        let g = gamma_half_integer(3, 4, prec).unwrap();
        assert_eq!(g.to_f64(), 24.0);
        assert!(gamma_half_integer(0, 2, prec).is_err());
    }

    #[test]
    fn gamma_recurrence_is_exact_at_working_precision() {
        let prec = p(512);
        for d in [3usize, 4, 5] {
            let mut prev = gamma_half_integer(0, d, prec).unwrap();
            for k in 0..400usize {
                let next = gamma_half_integer(k + 1, d, prec).unwrap();
                let arg = BigReal::ratio((2 * k + d) as i64, 2, prec);
                let expect = &prev * &arg;
                let diff = (&next - &expect).abs();
                assert!(diff <= next.ulp(), "d={d} k={k}");
                prev = next;
            }
        }
    }

    #[test]
    fn half_integer_gamma_identity_holds() {
        // k! Γ(k + 1/2) = √π (2k)! 2^{-2k}
        let prec = p(512);
        let mut fact_k = Float::with_val(2048, 1);
        let mut fact_2k = Float::with_val(2048, 1);
        for k in 0..=400usize {
            if k > 0 {
                fact_k *= k as u32;
                fact_2k *= (2 * k - 1) as u32;
                fact_2k *= (2 * k) as u32;
            }
            let gamma_half = if k == 0 {
                BigReal::sqrt_pi(prec)
            } else {
                gamma_half_integer(k - 1, 3, prec).unwrap()
            };
            let lhs = BigReal::with_precision(&fact_k, prec) * gamma_half;
            let rhs = BigReal::sqrt_pi(prec)
                * BigReal::with_precision(&(fact_2k.clone() >> (2 * k) as i32), prec);
            let rel = ((&lhs - &rhs) / &rhs).abs();
            assert!(rel.to_f64() < 2f64.powi(-500), "k={k}: {rel:?}");
        }
    }

    #[test]
    fn modified_bessel_anchor_values() {
        let prec = p(256);
        let one = BigReal::from_i64(1, prec);
        let (i0, _) = mod_sph_bessel_pair(0, &one).unwrap();
        // sinh(1) by its own power series
        let mut sinh = Float::with_val(300, 0);
        let mut term = Float::with_val(300, 1);
        for n in 1..80u32 {
            if n > 1 {
                term /= (2 * n - 2) * (2 * n - 1);
            }
            sinh += &term;
        }
        assert!((i0.to_f64() - sinh.to_f64()).abs() < 1e-15);
        assert!(close(&i0, 1.175_201_193_643_801_4, 1e-15));
        let (i1, _) = mod_sph_bessel_pair(1, &one).unwrap();
        assert!(close(&i1, 0.367_879_441_171_442_3, 1e-15));

        let tiny = BigReal::from_f64(1e-30, prec);
        let (i0_tiny, _) = mod_sph_bessel_pair(0, &tiny).unwrap();
        assert!((i0_tiny.to_f64() - 1.0).abs() < 1e-50_f64.max(f64::EPSILON));
        assert!(mod_sph_bessel_pair(0, &BigReal::from_i64(-1, prec)).is_err());
        assert!(mod_sph_bessel_pair(0, &BigReal::zero(prec)).is_err());
    }

    #[test]
    fn spherical_bessel_anchor_values() {
        let prec = p(256);
        let pi = BigReal::pi(prec);
        let (j0_pi, ..) = sph_bessel_pair(0, &pi).unwrap();
        assert!(j0_pi.to_f64().abs() < 1e-70);

        let one = BigReal::from_i64(1, prec);
        let (j0, _, _, _) = sph_bessel_pair(0, &one).unwrap();
        assert!(close(&j0, 0.841_470_984_807_896_5, 1e-15));
        let (_, _, y1, _) = sph_bessel_pair(1, &one).unwrap();
        assert!(close(&y1, -1.381_773_290_676_036_2, 1e-15));
        assert!(matches!(sph_bessel_pair(0, &BigReal::zero(prec)), Err(Error::Singular(_))));
    }

    #[test]
    fn wronskians_match_closed_forms() {
        let prec = p(256);
        for &xv in &[0.1, 1.0, 10.0] {
            let x = BigReal::from_f64(xv, prec);
            let inv_x2 = 1.0 / (xv * xv);
            for k in [0usize, 1, 5, 20] {
                let (j, dj, y, dy) = sph_bessel_pair(k, &x).unwrap();
                let w = (&j * &dy - &dj * &y).to_f64();
                assert!((w - inv_x2).abs() <= 1e-12 * inv_x2, "j/y k={k} x={xv}: {w}");
            }
        }
    }

    /// w = x i_k(x) satisfies w'' = (1 + k(k+1)/x²) w.
    #[test]
    fn modified_bessel_satisfies_radial_equation() {
        let prec = p(256);
        let h = BigReal::from_f64(1e-8, prec);
        for &xv in &[0.1, 1.0, 10.0] {
            for k in [0usize, 1, 2, 7, 20, 41, 60] {
                let x = BigReal::from_f64(xv, prec);
                let w = |arg: &BigReal| -> BigReal {
                    let (ik, _) = mod_sph_bessel_pair(k, arg).unwrap();
                    arg * &ik
                };
                let wm = w(&(&x - &h));
                let w0 = w(&x);
                let wp = w(&(&x + &h));
                let two = BigReal::from_i64(2, prec);
                let second = (&(&wp - &(&two * &w0)) + &wm) / (&h * &h);
                let coeff = 1.0 + (k * (k + 1)) as f64 / (xv * xv);
                let expected = BigReal::from_f64(coeff, prec) * w0;
                let rel = ((&second - &expected) / &expected).abs().to_f64();
                assert!(rel <= 1e-10, "k={k} x={xv} rel={rel}");
            }
        }
    }

    #[test]
    fn bulk_tables_agree_with_single_order_routines() {
        let prec = p(256);
        let work = prec.bits() + GUARD_BITS;
        for &xv in &[0.003, 0.7, 4.0, 12.5] {
            let x = BigReal::from_f64(xv, prec);
            let xw = Float::with_val(work, x.as_float());
            let mut modified = BesselOrders::new(BesselFamily::Modified);
            modified.fill(BesselFamily::Modified, &xw, 40, work);
            let mut spherical = BesselOrders::new(BesselFamily::Spherical);
            spherical.fill(BesselFamily::Spherical, &xw, 40, work);
            for k in [0usize, 1, 3, 17, 40] {
                let (ik, _) = mod_sph_bessel_pair(k, &x).unwrap();
                let rel = (modified.first[k].to_f64() - ik.to_f64()).abs() / ik.to_f64().abs();
                assert!(rel < 1e-14, "i x={xv} k={k}");
                let (jk, _, yk, _) = sph_bessel_pair(k, &x).unwrap();
                let relj = (spherical.first[k].to_f64() - jk.to_f64()).abs() / jk.to_f64().abs();
                let rely = (spherical.second[k].to_f64() - yk.to_f64()).abs() / yk.to_f64().abs();
                assert!(relj < 1e-12 && rely < 1e-12, "j/y x={xv} k={k}");
                // i_k k_k' - i_k' k_k = -1/x², with k' = -k_{k+1} + (k/x) k_k
                let kx = k as f64 / xv;
                let (ik, ik1) = (modified.first[k].to_f64(), modified.first[k + 1].to_f64());
                let (kk, kk1) = (modified.second[k].to_f64(), modified.second[k + 1].to_f64());
                let w = ik * (-kk1 + kx * kk) - (ik1 + kx * ik) * kk;
                if w.is_finite() {
                    assert!((w + 1.0 / (xv * xv)).abs() < 1e-9 / (xv * xv), "x={xv} k={k} w={w}");
                }
            }
        }
    }
}

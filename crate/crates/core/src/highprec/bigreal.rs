use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::{Constant, Round};
use rug::ops::CompleteRound;
use rug::Float;

use crate::error::{Error, Result};

/// Mantissa size in bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precision(u32);

impl Precision {
    pub const MIN_BITS: u32 = 64;
    pub const BITS_64: Precision = Precision(64);
    pub const BITS_128: Precision = Precision(128);
    pub const BITS_256: Precision = Precision(256);
    pub const BITS_512: Precision = Precision(512);
    pub const BITS_1024: Precision = Precision(1024);

    pub fn new(bits: u32) -> Result<Self> {
        if bits < Self::MIN_BITS {
            return Err(Error::InvalidPrecision(bits));
        }
        Ok(Precision(bits))
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    /// Precision extended by `extra` guard bits.
    #[inline]
    pub fn with_guard(self, extra: u32) -> Precision {
        Precision(self.0 + extra)
    }

    /// Number of significant decimal digits that make a decimal string
    /// round-trip to the same binary value.
    pub fn decimal_digits(self) -> usize {
        (f64::from(self.0) * std::f64::consts::LOG10_2).ceil() as usize + 2
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::BITS_512
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Arbitrary-precision real carrying its mantissa precision.
///
/// Binary operations between two values run at the larger of the two
/// precisions. Hot loops work on the wrapped [`Float`] directly.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct BigReal(Float);

impl BigReal {
    pub fn zero(prec: Precision) -> Self {
        BigReal(Float::new(prec.bits()))
    }

    pub fn from_f64(value: f64, prec: Precision) -> Self {
        BigReal(Float::with_val(prec.bits(), value))
    }

    pub fn from_i64(value: i64, prec: Precision) -> Self {
        BigReal(Float::with_val(prec.bits(), value))
    }

    /// Exact rational `num / den` rounded once to `prec`.
    pub fn ratio(num: i64, den: i64, prec: Precision) -> Self {
        let mut x = Float::with_val(prec.bits() + 64, num);
        x /= den;
        BigReal(Float::with_val(prec.bits(), &x))
    }

    pub fn from_float(value: Float) -> Self {
        debug_assert!(value.prec() >= Precision::MIN_BITS);
        BigReal(value)
    }

    /// Re-rounds an existing value to another precision.
    pub fn with_precision(value: &Float, prec: Precision) -> Self {
        BigReal(Float::with_val(prec.bits(), value))
    }

    pub fn pi(prec: Precision) -> Self {
        let guarded = Float::with_val(prec.bits() + 32, Constant::Pi);
        BigReal(Float::with_val(prec.bits(), &guarded))
    }

    pub fn sqrt_pi(prec: Precision) -> Self {
        let guarded = Float::with_val(prec.bits() + 32, Constant::Pi).sqrt();
        BigReal(Float::with_val(prec.bits(), &guarded))
    }

    pub fn e(prec: Precision) -> Self {
        let guarded = Float::with_val(prec.bits() + 32, 1).exp();
        BigReal(Float::with_val(prec.bits(), &guarded))
    }

    /// Parses a decimal string at the given precision.
    pub fn parse_decimal(text: &str, prec: Precision) -> Result<Self> {
        let parsed = Float::parse(text.trim())
            .map_err(|e| Error::InvalidArgument(format!("bad decimal {text:?}: {e}")))?;
        Ok(BigReal(parsed.complete(prec.bits())))
    }

    /// Decimal string with enough digits to round-trip at this precision.
    pub fn to_decimal(&self) -> String {
        let digits = self.precision().decimal_digits();
        self.0.to_string_radix_round(10, Some(digits), Round::Nearest)
    }

    #[inline]
    pub fn precision(&self) -> Precision {
        Precision(self.0.prec())
    }

    #[inline]
    pub fn as_float(&self) -> &Float {
        &self.0
    }

    #[inline]
    pub fn into_float(self) -> Float {
        self.0
    }

    #[inline]
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn abs(&self) -> BigReal {
        BigReal(self.0.clone().abs())
    }

    pub fn sqrt(&self) -> BigReal {
        BigReal(self.0.clone().sqrt())
    }

    /// Distance to the next representable value above |self|.
    pub fn ulp(&self) -> BigReal {
        let prec = self.0.prec();
        match self.0.get_exp() {
            Some(exp) => {
                let one = Float::with_val(prec, 1);
                BigReal(one << (exp - prec as i32))
            }
            None => BigReal(Float::new(prec)),
        }
    }

    fn joint_prec(a: &BigReal, b: &BigReal) -> u32 {
        a.0.prec().max(b.0.prec())
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigReal({}, {} bits)", self.0.to_string_radix(10, Some(24)), self.0.prec())
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal())
    }
}

impl PartialEq<f64> for BigReal {
    fn eq(&self, other: &f64) -> bool {
        self.0 == *other
    }
}

impl PartialOrd<f64> for BigReal {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl<'a> $trait<&'a BigReal> for &'a BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &'a BigReal) -> BigReal {
                let prec = BigReal::joint_prec(self, rhs);
                BigReal(Float::with_val(prec, (&self.0).$method(&rhs.0)))
            }
        }

        impl $trait<BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: BigReal) -> BigReal {
                (&self).$method(&rhs)
            }
        }

        impl<'a> $trait<&'a BigReal> for BigReal {
            type Output = BigReal;
            fn $method(self, rhs: &'a BigReal) -> BigReal {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(-self.0)
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal(-self.0.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_floor_is_enforced() {
        assert!(Precision::new(63).is_err());
        assert_eq!(Precision::new(64).unwrap().bits(), 64);
        assert_eq!(Precision::new(300).unwrap().bits(), 300);
    }

    #[test]
    fn mixed_precision_arithmetic_uses_the_larger_precision() {
        let a = BigReal::from_f64(1.5, Precision::BITS_128);
        let b = BigReal::ratio(1, 3, Precision::BITS_512);
        assert_eq!((&a + &b).precision(), Precision::BITS_512);
        assert_eq!((&b * &a).precision(), Precision::BITS_512);
        assert_eq!((&a / &a).precision(), Precision::BITS_128);
    }

    #[test]
    fn decimal_round_trip_is_within_one_ulp() {
        for bits in [64u32, 128, 256, 512, 1024] {
            let prec = Precision::new(bits).unwrap();
            let x = BigReal::ratio(22, 7, prec) * BigReal::sqrt_pi(prec);
            let back = BigReal::parse_decimal(&x.to_decimal(), prec).unwrap();
            let diff = (&x - &back).abs();
            assert!(diff <= x.ulp(), "{bits}: {diff:?}");
        }
    }

    #[test]
    fn constants_are_close_to_f64() {
        let p = Precision::BITS_256;
        assert!((BigReal::pi(p).to_f64() - std::f64::consts::PI).abs() < 1e-15);
        assert!((BigReal::sqrt_pi(p).to_f64() - std::f64::consts::PI.sqrt()).abs() < 1e-15);
        assert!((BigReal::e(p).to_f64() - std::f64::consts::E).abs() < 1e-15);
    }
}

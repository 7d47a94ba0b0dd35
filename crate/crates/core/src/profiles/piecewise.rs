use rug::Float;

use super::ProfileKind;
use crate::error::{Error, Result};
use crate::highprec::{BigReal, Precision};

/// Radial piecewise-constant function on [0, R].
///
/// Piece `j` (0-based) takes `values[j]` on `(breakpoints[j], breakpoints[j + 1]]`;
/// the value at r = 0 is the first piece's value.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseProfile {
    kind: ProfileKind,
    breakpoints: Vec<BigReal>,
    values: Vec<BigReal>,
}

impl PiecewiseProfile {
    pub fn new(kind: ProfileKind, breakpoints: Vec<BigReal>, values: Vec<BigReal>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidProfile("profile needs at least one piece".into()));
        }
        if breakpoints.len() != values.len() + 1 {
            return Err(Error::InvalidProfile(format!(
                "{} breakpoints for {} values (expected {})",
                breakpoints.len(),
                values.len(),
                values.len() + 1
            )));
        }
        if !breakpoints[0].is_zero() {
            return Err(Error::InvalidProfile("first breakpoint must be 0".into()));
        }
        if let Some(j) = breakpoints.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidProfile(format!(
                "breakpoints not increasing at index {}",
                j + 1
            )));
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidProfile(format!("value {j} is not finite")));
        }
        if kind == ProfileKind::Conductivity {
            if let Some(j) = values.iter().position(|v| *v <= 0.0) {
                return Err(Error::InvalidProfile(format!(
                    "conductivity must be positive, piece {j} has value {}",
                    values[j].to_f64()
                )));
            }
        }
        Ok(PiecewiseProfile {
            kind,
            breakpoints,
            values,
        })
    }

    /// Uniform partition of [0, radius] into `values.len()` pieces.
    pub fn uniform(kind: ProfileKind, radius: &BigReal, values: Vec<BigReal>) -> Result<Self> {
        let m = values.len();
        let breakpoints = uniform_breakpoints(radius, m);
        Self::new(kind, breakpoints, values)
    }

    /// Constant profile with a single piece.
    pub fn constant(kind: ProfileKind, radius: &BigReal, value: &BigReal) -> Result<Self> {
        Self::uniform(kind, radius, vec![value.clone()])
    }

    /// Profile equal to `inner_value` on [0, step] and `outer_value` on (step, R].
    pub fn step(
        kind: ProfileKind,
        radius: &BigReal,
        step: &BigReal,
        inner_value: &BigReal,
        outer_value: &BigReal,
    ) -> Result<Self> {
        let prec = radius.precision();
        Self::new(
            kind,
            vec![BigReal::zero(prec), step.clone(), radius.clone()],
            vec![inner_value.clone(), outer_value.clone()],
        )
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn radius(&self) -> &BigReal {
        self.breakpoints.last().expect("validated non-empty")
    }

    pub fn breakpoints(&self) -> &[BigReal] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[BigReal] {
        &self.values
    }

    pub fn pieces(&self) -> usize {
        self.values.len()
    }

    /// Largest precision among breakpoints and values.
    pub fn precision(&self) -> Precision {
        self.breakpoints
            .iter()
            .chain(self.values.iter())
            .map(BigReal::precision)
            .max()
            .unwrap_or_default()
    }

    /// Value at radius r (right-closed pieces; r = 0 maps to the first piece).
    pub fn value_at(&self, r: f64) -> f64 {
        self.values[self.piece_index(r)].to_f64()
    }

    pub fn piece_index(&self, r: f64) -> usize {
        // first j with r <= breakpoints[j + 1]
        let upper = &self.breakpoints[1..];
        let idx = upper.partition_point(|b| *b < r);
        idx.min(self.values.len() - 1)
    }

    /// Same profile continued with the background value out to `new_radius`.
    pub fn extend_with_background(&self, new_radius: &BigReal) -> Result<Self> {
        if new_radius < self.radius() {
            return Err(Error::InvalidArgument("cannot extend to a smaller radius".into()));
        }
        if new_radius == self.radius() {
            return Ok(self.clone());
        }
        let prec = self.precision();
        let mut breakpoints = self.breakpoints.clone();
        let mut values = self.values.clone();
        breakpoints.push(new_radius.clone());
        values.push(BigReal::from_f64(self.kind.background(), prec));
        Self::new(self.kind, breakpoints, values)
    }

    /// Profile with every value replaced by `f(value)`.
    pub fn map_values(&self, f: impl Fn(&BigReal) -> BigReal) -> Result<Self> {
        Self::new(self.kind, self.breakpoints.clone(), self.values.iter().map(f).collect())
    }

    /// Values minus the background (γ − 1 or q itself).
    pub fn perturbation_values(&self) -> Vec<BigReal> {
        self.values
            .iter()
            .map(|v| match self.kind {
                ProfileKind::Conductivity => {
                    let one = Float::with_val(v.precision().bits(), 1);
                    BigReal::from_float(Float::with_val(v.precision().bits(), v.as_float() - &one))
                }
                ProfileKind::Potential => v.clone(),
            })
            .collect()
    }
}

/// 0 = r_0 < r_1 < … < r_m = R with r_j = jR/m, each rounded once.
pub fn uniform_breakpoints(radius: &BigReal, m: usize) -> Vec<BigReal> {
    let prec = radius.precision().bits();
    (0..=m)
        .map(|j| {
            if j == m {
                return radius.clone();
            }
            let mut r = Float::with_val(prec + 64, radius.as_float());
            r *= j as u64;
            r /= m as u64;
            BigReal::from_float(Float::with_val(prec, &r))
        })
        .collect()
}

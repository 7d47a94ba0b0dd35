use rug::float::Constant;
use rug::Float;

use super::ProfileKind;
use crate::error::{Error, Result};
use crate::highprec::{BigReal, Precision};

/// Built-in radial formulas.
#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticShape {
    /// `value` everywhere.
    Constant { value: BigReal },
    /// `inner` on [0, r1], `outer` beyond.
    Step2 { r1: BigReal, inner: BigReal, outer: BigReal },
    /// `v1` on [0, r1], `v2` on (r1, r2], `v3` beyond.
    Step3 {
        r1: BigReal,
        r2: BigReal,
        v1: BigReal,
        v2: BigReal,
        v3: BigReal,
    },
    /// background + amplitude · exp(1 − 1/(1 − (r/width)²)) for r < width.
    Bump { amplitude: BigReal, width: BigReal },
    /// background + amplitude · (1 − r/width) for r < width; Lipschitz.
    Tent { amplitude: BigReal, width: BigReal },
    /// background + Σ_j c_j √2 cos(π(j − 1/2) r/R).
    CosineSeries { coefficients: Vec<BigReal> },
    /// 2 − sign(r − 1/2)(r − 1/2), i.e. 2 − |r − 1/2|.
    Exp3Profile,
}

impl AnalyticShape {
    pub fn name(&self) -> &'static str {
        match self {
            AnalyticShape::Constant { .. } => "constant",
            AnalyticShape::Step2 { .. } => "step2",
            AnalyticShape::Step3 { .. } => "step3",
            AnalyticShape::Bump { .. } => "bump",
            AnalyticShape::Tent { .. } => "tent",
            AnalyticShape::CosineSeries { .. } => "cosine_series",
            AnalyticShape::Exp3Profile => "exp3_profile",
        }
    }
}

/// A radial profile given by a named formula on [0, R].
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticProfile {
    pub kind: ProfileKind,
    pub radius: BigReal,
    pub shape: AnalyticShape,
}

impl AnalyticProfile {
    pub fn new(kind: ProfileKind, radius: BigReal, shape: AnalyticShape) -> Result<Self> {
        if radius <= 0.0 || !radius.is_finite() {
            return Err(Error::InvalidProfile("radius must be positive".into()));
        }
        if let AnalyticShape::Bump { width, .. } | AnalyticShape::Tent { width, .. } = &shape {
            if *width <= 0.0 {
                return Err(Error::InvalidProfile(format!("{} width must be positive", shape.name())));
            }
        }
        Ok(AnalyticProfile { kind, radius, shape })
    }

    pub fn precision(&self) -> Precision {
        self.radius.precision()
    }

    /// Evaluates the formula at `r`, at the precision of `r`.
    pub fn eval(&self, r: &Float) -> Float {
        let prec = r.prec();
        let background = Float::with_val(prec, self.kind.background());
        match &self.shape {
            AnalyticShape::Constant { value } => Float::with_val(prec, value.as_float()),
            AnalyticShape::Step2 { r1, inner, outer } => {
                if *r <= *r1.as_float() {
                    Float::with_val(prec, inner.as_float())
                } else {
                    Float::with_val(prec, outer.as_float())
                }
            }
            AnalyticShape::Step3 { r1, r2, v1, v2, v3 } => {
                let v = if *r <= *r1.as_float() {
                    v1
                } else if *r <= *r2.as_float() {
                    v2
                } else {
                    v3
                };
                Float::with_val(prec, v.as_float())
            }
            AnalyticShape::Bump { amplitude, width } => {
                let s = Float::with_val(prec, r / width.as_float());
                if s >= 1 {
                    return background;
                }
                let s2 = Float::with_val(prec, s.square_ref());
                let denom = Float::with_val(prec, 1 - s2);
                let mut e = Float::with_val(prec, 1 - Float::with_val(prec, denom.recip_ref()));
                e.exp_mut();
                e *= amplitude.as_float();
                e + background
            }
            AnalyticShape::Tent { amplitude, width } => {
                let s = Float::with_val(prec, r / width.as_float());
                if s >= 1 {
                    return background;
                }
                Float::with_val(prec, 1 - s) * amplitude.as_float() + background
            }
            AnalyticShape::CosineSeries { coefficients } => {
                let pi = Float::with_val(prec + 16, Constant::Pi);
                let sqrt2 = Float::with_val(prec, 2).sqrt();
                let scaled = Float::with_val(prec + 16, r / self.radius.as_float());
                let mut sum = Float::new(prec);
                for (j, c) in coefficients.iter().enumerate() {
                    // π (j + 1/2) r / R for 0-based j
                    let mut arg = Float::with_val(prec + 16, &pi * &scaled);
                    arg *= (2 * j + 1) as u32;
                    arg >>= 1;
                    let term = Float::with_val(prec, arg.cos_ref()) * c.as_float();
                    sum += term;
                }
                sum *= &sqrt2;
                sum + background
            }
            AnalyticShape::Exp3Profile => {
                let shifted = Float::with_val(prec, r - 0.5f64);
                let sign = match shifted.cmp0() {
                    Some(std::cmp::Ordering::Greater) => 1,
                    Some(std::cmp::Ordering::Less) => -1,
                    _ => 0,
                };
                Float::with_val(prec, 2) - shifted * sign
            }
        }
    }

    pub fn eval_f64(&self, r: f64) -> f64 {
        let prec = self.precision().bits().max(64);
        self.eval(&Float::with_val(prec, r)).to_f64()
    }

    /// Lipschitz-free check used by tests: whether the formula has jumps.
    pub fn is_discontinuous(&self) -> bool {
        matches!(
            self.shape,
            AnalyticShape::Step2 { .. } | AnalyticShape::Step3 { .. }
        )
    }
}

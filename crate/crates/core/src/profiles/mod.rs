//! Radial profiles: potentials q(r) and conductivities γ(r) on [0, R].

mod analytic;
mod parse;
mod piecewise;

use rug::Float;

pub use analytic::{AnalyticProfile, AnalyticShape};
pub use parse::{parse_profile, serialize_analytic, serialize_piecewise, ParsedProfile};
pub use piecewise::{uniform_breakpoints, PiecewiseProfile};

use crate::error::{Error, Result};
use crate::highprec::BigReal;

/// Default piece count for midpoint projection.
pub const DEFAULT_PIECES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProfileKind {
    Potential,
    Conductivity,
}

impl ProfileKind {
    /// 1 for conductivities, 0 for potentials.
    pub fn background(self) -> f64 {
        match self {
            ProfileKind::Potential => 0.0,
            ProfileKind::Conductivity => 1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ProfileKind::Potential => "potential",
            ProfileKind::Conductivity => "conductivity",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "potential" | "q" => Some(ProfileKind::Potential),
            "conductivity" | "gamma" => Some(ProfileKind::Conductivity),
            _ => None,
        }
    }
}

impl std::fmt::Display for ProfileKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Samples `profile` at the midpoints of a uniform m-piece partition.
pub fn project_midpoint(profile: &AnalyticProfile, m: usize) -> Result<PiecewiseProfile> {
    project_midpoint_with(profile.kind, &profile.radius, m, |r| profile.eval(r))
}

/// Midpoint projection of an arbitrary radial function.
pub fn project_midpoint_with(
    kind: ProfileKind,
    radius: &BigReal,
    m: usize,
    f: impl Fn(&Float) -> Float,
) -> Result<PiecewiseProfile> {
    if m == 0 {
        return Err(Error::InvalidArgument("piece count must be at least 1".into()));
    }
    let prec = radius.precision().bits();
    let breakpoints = uniform_breakpoints(radius, m);
    let values = (0..m)
        .map(|j| {
            // (2j + 1) R / (2m), rounded once
            let mut mid = Float::with_val(prec + 64, radius.as_float());
            mid *= (2 * j + 1) as u64;
            mid /= (2 * m) as u64;
            let mid = Float::with_val(prec, &mid);
            let v = f(&mid);
            if !v.is_finite() {
                return Err(Error::InvalidProfile(format!("profile not finite at r = {}", mid.to_f64())));
            }
            Ok(BigReal::from_float(Float::with_val(prec, &v)))
        })
        .collect::<Result<Vec<_>>>()?;
    PiecewiseProfile::new(kind, breakpoints, values)
}

/// Outcome of [`validate_profile`].
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileReport {
    /// Indices of pieces with non-positive conductivity.
    pub positivity_violations: Vec<usize>,
    pub boundary_value: f64,
    pub boundary_ok: bool,
    /// Largest breakpoint below which the profile differs from its background.
    pub support_radius: f64,
}

impl ProfileReport {
    pub fn is_clean(&self) -> bool {
        self.positivity_violations.is_empty() && self.boundary_ok
    }

    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.positivity_violations.is_empty() {
            out.push(format!("non-positive conductivity on pieces {:?}", self.positivity_violations));
        }
        if !self.boundary_ok {
            out.push(format!("boundary value {} differs from 1", self.boundary_value));
        }
        out
    }
}

/// Checks positivity, the boundary value of a conductivity, and the support radius.
pub fn validate_profile(p: &PiecewiseProfile, boundary_tol: f64) -> ProfileReport {
    let values = p.values();
    let positivity_violations = match p.kind() {
        ProfileKind::Conductivity => values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v <= 0.0)
            .map(|(j, _)| j)
            .collect(),
        ProfileKind::Potential => Vec::new(),
    };
    let boundary_value = values.last().map(BigReal::to_f64).unwrap_or(f64::NAN);
    let boundary_ok = match p.kind() {
        ProfileKind::Conductivity => (boundary_value - 1.0).abs() <= boundary_tol,
        ProfileKind::Potential => true,
    };
    let background = p.kind().background();
    let support_radius = values
        .iter()
        .rposition(|v| *v != background)
        .map(|j| p.breakpoints()[j + 1].to_f64())
        .unwrap_or(0.0);
    ProfileReport {
        positivity_violations,
        boundary_value,
        boundary_ok,
        support_radius,
    }
}

//! Born reconstruction of a step conductivity and its estimated support.

use radial_born::born::BornMode;
use radial_born::dtn::spectrum;
use radial_born::highprec::BigReal;
use radial_born::profiles::{PiecewiseProfile, ProfileKind};
use radial_born::reconstruct::{born_reconstruction, error_norms, support_radius_estimate, SolverParams};

fn main() -> radial_born::Result<()> {
    let params = SolverParams::default();
    let b = |x: f64| BigReal::from_f64(x, params.precision);
    let g = PiecewiseProfile::step(ProfileKind::Conductivity, &b(1.0), &b(0.5), &b(2.0), &b(1.0))?;
    let s = spectrum(&g, params.terms, params.precision)?;
    let rec = born_reconstruction(&s, &BornMode::Unit, &params)?;
    let (l2, linf) = error_norms(&rec.samples, |r| g.value_at(r), 0.0, 1.0)?;
    let support = support_radius_estimate(&rec.samples.restricted(1.0), 1.0, 0.01)?;
    println!("ξ ≤ {}: L2 error {l2:.4}, Linf error {linf:.4}, support estimate {support:.4}", params.xi_cutoff());
    for (r, v) in rec.samples.restricted(1.0).points().step_by(4) {
        println!("  {r:.4}  {v:.5}");
    }
    Ok(())
}

//! Fixed-point refinement of the Born approximation for a smooth conductivity.

use radial_born::dtn::spectrum;
use radial_born::highprec::BigReal;
use radial_born::profiles::{project_midpoint, AnalyticProfile, AnalyticShape, ProfileKind};
use radial_born::reconstruct::{iterate_born, SolverParams};

fn main() -> radial_born::Result<()> {
    let params = SolverParams { pieces: 500, ..SolverParams::default() };
    let b = |x: f64| BigReal::from_f64(x, params.precision);
    let shape = AnalyticShape::Bump { amplitude: b(0.3), width: b(1.0) };
    let g = project_midpoint(&AnalyticProfile::new(ProfileKind::Conductivity, b(1.0), shape)?, params.pieces)?;
    let target = spectrum(&g, params.terms, params.precision)?;
    let trace = iterate_born(ProfileKind::Conductivity, &target, &g, 5, &params)?;
    for (n, (l2, li)) in trace.l2_errors.iter().zip(&trace.linf_errors).enumerate() {
        println!("iterate {n}: log10 L2 = {:.3}, log10 Linf = {:.3}", l2.log10(), li.log10());
    }
    Ok(())
}

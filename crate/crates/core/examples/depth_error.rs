//! Mean Born error against depth for random potentials.

use radial_born::reconstruct::{ensemble_depth_profile, SolverParams};

fn main() -> radial_born::Result<()> {
    let params = SolverParams { pieces: 300, terms: 100, ..SolverParams::default() };
    for alpha in [0.5, 1.0, 2.0] {
        let e = ensemble_depth_profile(7, 8, alpha, 20, &params)?;
        println!(
            "α = {alpha}: e on [0, 0.2] = {:.4}, on [0.4, 0.6] = {:.4}, on [0.8, 1] = {:.4}",
            e.mean_on(0.0, 0.2),
            e.mean_on(0.4, 0.6),
            e.mean_on(0.8, 1.0)
        );
    }
    Ok(())
}

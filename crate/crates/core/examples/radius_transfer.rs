//! Eigenvalues on B_R from the unit-sphere spectrum, checked against a direct solve.

use radial_born::dtn::{spectrum, transfer_radius};
use radial_born::highprec::{BigReal, Precision};
use radial_born::profiles::{PiecewiseProfile, ProfileKind};

fn main() -> radial_born::Result<()> {
    let p = Precision::BITS_256;
    let b = |x: f64| BigReal::from_f64(x, p);
    let q = PiecewiseProfile::step(ProfileKind::Potential, &b(1.0), &b(0.9), &b(3.0), &b(0.0))?;
    let unit = spectrum(&q, 20, p)?;
    for r in [2.0, 5.0] {
        let moved = transfer_radius(&unit, &b(r), 3)?;
        let direct = spectrum(&q.extend_with_background(&b(r))?, 20, p)?;
        let worst = (0..=20)
            .map(|k| {
                let d = (moved.lambda(k) - direct.lambda(k)).abs();
                (d.to_f64() / direct.lambda(k).to_f64().abs().max(1e-300)).abs()
            })
            .fold(0.0, f64::max);
        println!("R = {r}: max relative difference over k ≤ 20 is {worst:e}");
    }
    Ok(())
}

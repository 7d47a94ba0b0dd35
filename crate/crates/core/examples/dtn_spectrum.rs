//! Forward DtN eigenvalues for a potential and a conductivity.

use radial_born::dtn::spectrum;
use radial_born::highprec::{BigReal, Precision};
use radial_born::profiles::{PiecewiseProfile, ProfileKind};

fn main() -> radial_born::Result<()> {
    let p = Precision::BITS_256;
    let b = |x: f64| BigReal::from_f64(x, p);

    let q = PiecewiseProfile::constant(ProfileKind::Potential, &b(1.0), &b(1.0))?;
    let s = spectrum(&q, 4, p)?;
    println!("q = 1 on the unit ball");
    for k in 0..=4 {
        println!("  k = {k}  λ_k = {}", &s.lambda(k).to_decimal()[..42]);
    }
    println!("  coth(1) - 1 ≈ {:.16}", 1.0 / 1f64.tanh() - 1.0);

    let g = PiecewiseProfile::step(ProfileKind::Conductivity, &b(1.0), &b(0.5), &b(2.0), &b(1.0))?;
    let s = spectrum(&g, 8, p)?;
    println!("γ = 2 on B_1/2");
    for k in 0..=8 {
        println!("  k = {k}  λ_k - k = {:e}", s.shift(k).to_f64());
    }
    Ok(())
}

//! The Born formulas at the origin of Fourier space for each mode.

use radial_born::born::{born_conductivity_fourier, born_potential_fourier, BornMode, XiGrid};
use radial_born::dtn::spectrum;
use radial_born::highprec::{BigReal, Precision};
use radial_born::profiles::{PiecewiseProfile, ProfileKind};

fn main() -> radial_born::Result<()> {
    let p = Precision::BITS_256;
    let b = |x: f64| BigReal::from_f64(x, p);
    let grid = XiGrid::for_domain(10.0, 512, p)?.up_to(20.0);

    let q = PiecewiseProfile::step(ProfileKind::Potential, &b(1.0), &b(0.5), &b(2.0), &b(0.0))?;
    let sq = spectrum(&q, 60, p)?;
    for mode in [BornMode::Unit, BornMode::FiniteR(b(1.0)), BornMode::FiniteR(b(3.0)), BornMode::Scattering] {
        let f = born_potential_fourier(&sq, &grid, &mode, 3, p)?;
        println!("potential    {:<12} F(0) = {:.12}  F(ξ_max) = {:e}", mode.name(), f.values[0].to_f64(), f.values[grid.count - 1].to_f64());
    }

    let g = PiecewiseProfile::step(ProfileKind::Conductivity, &b(1.0), &b(0.5), &b(1.5), &b(1.0))?;
    let sg = spectrum(&g, 60, p)?;
    for mode in [BornMode::Unit, BornMode::Scattering, BornMode::MomentForm] {
        let f = born_conductivity_fourier(&sg, &grid, &mode, 3, p)?;
        println!("conductivity {:<12} F(0) = {:.12}", mode.name(), f.values[0].to_f64());
    }
    Ok(())
}

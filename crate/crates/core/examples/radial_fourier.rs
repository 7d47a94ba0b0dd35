//! Forward and inverse radial transforms of the indicator of B_1/2.

use radial_born::born::XiGrid;
use radial_born::fourier::{forward_radial_ft, inverse_radial_ft_direct, inverse_radial_ft_dst};
use radial_born::highprec::{BigReal, Precision};
use radial_born::profiles::{PiecewiseProfile, ProfileKind};

fn main() -> radial_born::Result<()> {
    let p = Precision::BITS_128;
    let b = |x: f64| BigReal::from_f64(x, p);
    let f = PiecewiseProfile::step(ProfileKind::Potential, &b(1.0), &b(0.5), &b(1.0), &b(0.0))?;
    let (length, n) = (10.0, 512);
    let grid = XiGrid::for_domain(length, n, p)?;
    let ft = forward_radial_ft(&f, &grid, 3)?;
    let fast = inverse_radial_ft_dst(&ft, length)?;
    let slow = inverse_radial_ft_direct(&ft, n, length)?;
    let mut gap = 0f64;
    for (a, c) in fast.values.iter().zip(&slow.values) {
        gap = gap.max((a - c).abs());
    }
    println!("DST vs direct sum: {gap:e}");
    for (r, v) in fast.points().step_by(8).take(10) {
        println!("  r = {r:.4}  f = {v:+.5}  exact = {}", if r <= 0.5 { 1 } else { 0 });
    }
    Ok(())
}

//! The eigenvalue series evaluated on exact moments reproduces the radial Fourier transform.

use radial_born::born::{moment_sequence_exact, series_on_grid, XiGrid};
use radial_born::fourier::forward_radial_ft;
use radial_born::highprec::{BigReal, Precision};
use radial_born::profiles::{PiecewiseProfile, ProfileKind};

fn main() -> radial_born::Result<()> {
    let p = Precision::BITS_512;
    let b = |x: f64| BigReal::from_f64(x, p);
    let q = PiecewiseProfile::step(ProfileKind::Potential, &b(1.0), &b(0.5), &b(1.0), &b(0.0))?;
    let sigma = moment_sequence_exact(&q, 200, 3, p)?;
    let grid = XiGrid::for_domain(10.0, 512, p)?.up_to(60.0);
    let series = series_on_grid(&sigma, &grid, 3, p)?;
    let exact = forward_radial_ft(&q, &grid, 3)?;
    let mut worst = 0f64;
    for j in 0..grid.count {
        worst = worst.max((&series.values[j] - &exact.values[j]).abs().to_f64());
    }
    println!("{} nodes on [0, {:.1}], max |series − transform| = {worst:e}", grid.count, grid.max().to_f64());
    Ok(())
}

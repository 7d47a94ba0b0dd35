//! Content-addressed spectrum cache: the second lookup is read from disk.

use std::time::Instant;

use radial_born::harness::SpectrumCache;
use radial_born::highprec::Precision;
use radial_born::profiles::parse_profile;

fn main() -> radial_born::Result<()> {
    let dir = std::env::temp_dir().join("radial-born-cache-example");
    let cache = SpectrumCache::new(&dir)?;
    let q = parse_profile("bump amplitude=5", Precision::BITS_512)?.to_piecewise(2000)?;
    for _ in 0..2 {
        let t = Instant::now();
        let (s, status) = cache.spectrum(&q, 150, Precision::BITS_512)?;
        println!("{status:?} in {:?}: λ_150 − 150 = {:e}", t.elapsed(), s.shift(150).to_f64());
    }
    println!("entries under {}", dir.display());
    Ok(())
}

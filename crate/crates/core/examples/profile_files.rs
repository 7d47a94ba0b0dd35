//! Parsing profile descriptions and checking them against the conductivity class.

use radial_born::highprec::Precision;
use radial_born::profiles::{parse_profile, validate_profile};

const FILES: [&str; 3] = [
    "kind conductivity\nradius 1\nbreakpoints 0 0.5 1\nvalues 2 1\n",
    "analytic bump kind=conductivity amplitude=0.3 width=0.8",
    "exp3_profile",
];

fn main() -> radial_born::Result<()> {
    let p = Precision::BITS_128;
    for text in FILES {
        let parsed = parse_profile(text, p)?;
        let piecewise = parsed.to_piecewise(200)?;
        let report = validate_profile(&piecewise, 1e-12);
        println!("{} ({} pieces)", text.lines().next().unwrap_or(""), piecewise.pieces());
        for w in report.warnings() {
            println!("  warning: {w}");
        }
    }
    match parse_profile("kind potential\nbreakpoints 0 0.5\nvalues 1 x\n", p) {
        Err(e) => println!("bad file: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}

use radial_born::born::XiGrid;
use radial_born::fourier::{forward_radial_ft, inverse_radial_ft, RadialSamples};
use radial_born::highprec::{BigReal, Precision};
use radial_born::profiles::{PiecewiseProfile, ProfileKind};
use radial_born::reconstruct::error_norms;

const P: Precision = Precision::BITS_256;

fn indicator(radius: f64) -> PiecewiseProfile {
    let b = |x: f64| BigReal::from_f64(x, P);
    if radius == 1.0 {
        PiecewiseProfile::constant(ProfileKind::Potential, &b(1.0), &b(1.0)).unwrap()
    } else {
        PiecewiseProfile::step(ProfileKind::Potential, &b(1.0), &b(radius), &b(1.0), &b(0.0)).unwrap()
    }
}

fn round_trip(radius: f64, n: usize, length: f64) -> RadialSamples {
    let grid = XiGrid::for_domain(length, n, P).unwrap();
    inverse_radial_ft(&forward_radial_ft(&indicator(radius), &grid, 3).unwrap(), n, length).unwrap()
}

fn max_error(s: &RadialSamples, a: f64, b: f64, value: f64) -> (f64, f64) {
    s.points()
        .filter(|(r, _)| *r > a && *r < b)
        .map(|(r, v)| ((v - value).abs(), r))
        .fold((0.0, 0.0), |m, x| if x.0 > m.0 { x } else { m })
}

#[test]
fn unit_ball_round_trip() {
    let s = round_trip(1.0, 512, 10.0);
    let (inside, at_in) = max_error(&s, 0.05, 0.95, 1.0);
    let (outside, at_out) = max_error(&s, 1.1, 9.0, 0.0);
    assert!(inside <= 1e-2, "inside error {inside} at r = {at_in}");
    assert!(outside <= 1e-2, "outside error {outside} at r = {at_out}");
}

#[test]
fn half_ball_round_trip_has_small_tail() {
    let s = round_trip(0.5, 512, 10.0);
    let (tail, at) = max_error(&s, 0.6, 10.0, 0.0);
    assert!(tail <= 1e-2, "tail {tail} at r = {at}");
}

#[test]
fn l2_error_decreases_with_resolution() {
    let truth = |r: f64| if r <= 0.5 { 1.0 } else { 0.0 };
    let coarse = error_norms(&round_trip(0.5, 256, 10.0), truth, 0.0, 1.0).unwrap().0;
    let fine = error_norms(&round_trip(0.5, 1024, 10.0), truth, 0.0, 1.0).unwrap().0;
    assert!(fine < coarse, "N = 1024: {fine}, N = 256: {coarse}");
}

#[test]
fn doubling_the_domain_does_not_hurt_the_interior() {
    // same spacing 10/512 on both domains
    let truth = |r: f64| if r <= 1.0 { 1.0 } else { 0.0 };
    for (a, b) in [(0.0, 1.0), (0.05, 0.95)] {
        let small = error_norms(&round_trip(1.0, 512, 10.0), truth, a, b).unwrap().0;
        let large = error_norms(&round_trip(1.0, 1024, 20.0), truth, a, b).unwrap().0;
        assert!(large <= small, "[{a}, {b}]: L = 20 gives {large}, L = 10 gives {small}");
    }
}

#[test]
fn origin_node_uses_the_limit_formula() {
    let (length, n) = (10.0, 512);
    let grid = XiGrid::for_domain(length, n, P).unwrap();
    let f = forward_radial_ft(&indicator(0.5), &grid, 3).unwrap();
    let s = inverse_radial_ft(&f, n, length).unwrap();
    let h = std::f64::consts::PI / length;
    let values = f.values_f64();
    let limit: f64 = h / (2.0 * std::f64::consts::PI.powi(2))
        * (0..=n).map(|j| (j as f64 * h).powi(2) * values[j]).sum::<f64>();
    assert!(s.values.iter().all(|v| v.is_finite()));
    assert!((s.values[0] - limit).abs() <= 1e-12 * limit.abs().max(1.0), "{} vs {limit}", s.values[0]);
}

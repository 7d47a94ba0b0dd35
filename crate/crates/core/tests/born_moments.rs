use rug::Float;

use radial_born::born::{
    born_potential_fourier, eval_series_l, log_abs_series, moment_sequence_exact, moments_from_samples,
    series_on_grid, BornMode, CoefficientSequence, SequenceMeaning, XiGrid,
};
use radial_born::dtn::{spectrum, DtnSpectrum};
use radial_born::fourier::forward_radial_ft;
use radial_born::highprec::{BigReal, Precision};
use radial_born::profiles::{project_midpoint, AnalyticProfile, AnalyticShape, PiecewiseProfile, ProfileKind};
use radial_born::reconstruct::{born_reconstruction, growth_slope, SolverParams};

fn big(x: f64, p: Precision) -> BigReal {
    BigReal::from_f64(x, p)
}

#[test]
fn series_identity_on_the_unit_ball() {
    let p = Precision::BITS_1024;
    let one = big(1.0, p);
    let q = PiecewiseProfile::constant(ProfileKind::Potential, &one, &one).unwrap();
    let sigma = moment_sequence_exact(&q, 400, 3, p).unwrap();
    let grid = XiGrid::for_domain(10.0, 512, p).unwrap().up_to(160.0);
    let series = series_on_grid(&sigma, &grid, 3, p).unwrap();
    let exact = forward_radial_ft(&q, &grid, 3).unwrap();
    for j in 0..grid.count {
        let e = (&series.values[j] - &exact.values[j]).abs().to_f64();
        assert!(e <= 1e-20, "node {j}: {e:e}");
    }
}

#[test]
fn finite_radius_derivative_is_the_series() {
    let p = Precision::BITS_512;
    let q = PiecewiseProfile::step(ProfileKind::Potential, &big(1.0, p), &big(0.7, p), &big(1.0, p), &big(0.0, p)).unwrap();
    let mu = moment_sequence_exact(&q, 60, 3, p).unwrap();
    let eps = BigReal::parse_decimal("1e-20", p).unwrap();
    let shifted = |s: f64| DtnSpectrum {
        kind: ProfileKind::Potential,
        radius: big(1.0, p),
        lambdas: mu
            .entries
            .iter()
            .enumerate()
            .map(|(k, m)| BigReal::from_float(Float::with_val(512, m.as_float() * eps.as_float()) * s + k as u32))
            .collect(),
        precision: p,
    };
    let grid = XiGrid::for_domain(10.0, 512, p).unwrap().up_to(24.0);
    let seq = CoefficientSequence::new(mu.entries.clone(), SequenceMeaning::EigenvalueShift).unwrap();
    for mode in [BornMode::FiniteR(big(2.0, p)), BornMode::FiniteR(big(5.0, p)), BornMode::Scattering] {
        let plus = born_potential_fourier(&shifted(1.0), &grid, &mode, 3, p).unwrap();
        let minus = born_potential_fourier(&shifted(-1.0), &grid, &mode, 3, p).unwrap();
        for j in 0..grid.count {
            let d = Float::with_val(512, plus.values[j].as_float() - minus.values[j].as_float()) / eps.as_float() / 2u32;
            let l = eval_series_l(&seq, &grid.node(j), 3, p).unwrap();
            let rel = (Float::with_val(512, &d - l.as_float()) / l.as_float()).abs().to_f64();
            assert!(rel <= 1e-10, "{} node {j}: {rel:e}", mode.name());
        }
    }
}

#[test]
fn conductivity_shifts_follow_moments_of_the_reconstruction() {
    // λ_k − k ≈ 2k(k + 1/2) σ_{k−1}[γ_exp − 1] for a small smooth conductivity
    let params = SolverParams::default();
    let p = params.precision;
    let shape = AnalyticShape::Bump { amplitude: big(0.05, p), width: big(1.0, p) };
    let g = project_midpoint(&AnalyticProfile::new(ProfileKind::Conductivity, big(1.0, p), shape).unwrap(), params.pieces).unwrap();
    let s = spectrum(&g, params.terms, p).unwrap();
    let rec = born_reconstruction(&s, &BornMode::Unit, &params).unwrap();
    let pert = rec.samples.restricted(1.0).map(|_, v| v - 1.0);
    let sigma = moments_from_samples(&pert, 10, 3).unwrap();
    for k in 1..=10usize {
        let predicted = 2.0 * k as f64 * (k as f64 + 0.5) * sigma.entries[k - 1].to_f64();
        let actual = s.shift(k).to_f64();
        let rel = ((predicted - actual) / actual).abs();
        assert!(rel <= 1e-2, "k = {k}: predicted {predicted:e}, actual {actual:e}, relative {rel:e}");
    }
}

#[test]
fn growth_rate_is_bounded_by_support_radius() {
    let p = Precision::BITS_512;
    for alpha in [0.5, 0.8] {
        let q = PiecewiseProfile::step(ProfileKind::Potential, &big(1.0, p), &big(alpha, p), &big(1.0, p), &big(0.0, p)).unwrap();
        let s = spectrum(&q, 200, p).unwrap();
        let mu = CoefficientSequence::new(s.shifts(), SequenceMeaning::EigenvalueShift).unwrap();
        let rate = growth_slope(&mu, 50.0, 150.0).unwrap();
        assert!(rate <= alpha * 1.05, "α = {alpha}: rate {rate}");
        assert!(rate >= alpha * 0.8, "α = {alpha}: rate {rate} suspiciously small");
    }
}

#[test]
fn log_series_is_finite_for_background() {
    let p = Precision::BITS_256;
    let zero = CoefficientSequence::new(vec![BigReal::zero(p); 5], SequenceMeaning::EigenvalueShift).unwrap();
    assert_eq!(log_abs_series(&zero, 3.0, 3).unwrap(), f64::NEG_INFINITY);
}

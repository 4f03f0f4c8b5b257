use std::f64::consts::PI;
use std::sync::Arc;

use eow_core::geometry::{CarrierSet, Cone};
use eow_core::pipeline::*;
use eow_core::uhf::*;
use eow_core::C64;

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn cubic() -> Vec<C64> {
    vec![c(0.0), c(2.0), c(0.0), c(1.0)]
}

fn horner(coeffs: &[C64], z: C64) -> C64 {
    coeffs.iter().rev().fold(c(0.0), |acc, k| acc * z + k)
}

fn gaussians() -> Vec<TestFunction> {
    (0..10)
        .map(|k| {
            let center = C64::new(-1.0 + 0.25 * k as f64, 0.1 * (k % 3) as f64);
            TestFunction::gaussian(vec![center], 0.7 + 0.1 * k as f64).unwrap()
        })
        .collect()
}

#[test]
fn global_flow_reproduces_a_cubic() {
    let ell = 0.5;
    let f1 = BoundaryFunction::polynomial(cubic(), Side::Upper, ell).unwrap();
    let f2 = BoundaryFunction::polynomial(cubic(), Side::Lower, ell).unwrap();
    let flow = global_continue(&f1, &f2, 1.5, &RegularizeOptions::default()).unwrap();

    let grid = rectangle_grid((-3.0, 3.0), (-0.6, 0.6), 7, 3);
    let overlap = overlap_report(&flow.reg1, &flow.reg2, &grid, 1e-6).unwrap();
    assert!(overlap.passed, "{overlap:?}");

    let points = rectangle_grid((-2.0, 2.0), (-3.0, 3.0), 5, 10);
    let coeffs = cubic();
    let rep = pointwise_report(&flow.h, |z| horner(&coeffs, z), &points, 1e-6).unwrap();
    assert!(rep.passed, "max deviation {}", rep.max_deviation);

    let bm = boundary_match(&flow.h, &flow.u1, &gaussians(), ell + 0.15, 1e-6).unwrap();
    assert!(bm.passed, "{}", bm.max_deviation);
}

#[test]
fn perturbed_continuation_fails_boundary_match_by_the_shift() {
    let ell = 0.5;
    let f1 = BoundaryFunction::polynomial(cubic(), Side::Upper, ell).unwrap();
    let f2 = BoundaryFunction::polynomial(cubic(), Side::Lower, ell).unwrap();
    let flow = global_continue(&f1, &f2, 1.5, &RegularizeOptions::default()).unwrap();
    let phi = TestFunction::gaussian_1d(0.0, 1.0).unwrap();
    let rep = boundary_match_with(
        |z| {
            let mut e = flow.h.eval(z)?;
            e.value += 1e-3;
            Ok(e)
        },
        &flow.u1,
        &[phi],
        1.0,
        1e-6,
    )
    .unwrap();
    assert!(!rep.passed);
    // 10⁻³·∫φ along the contour = 10⁻³·√π.
    assert!(
        (rep.max_deviation - 1e-3 * PI.sqrt()).abs() < 1e-8,
        "{}",
        rep.max_deviation
    );
}

#[test]
fn pole_between_the_contours_is_detected() {
    let ell = 0.6;
    let pole = C64::new(0.0, 0.5);
    let make = |side| {
        let eval: Evaluator = Arc::new(move |z: &[C64]| Ok(1.0 / (z[0] - pole)));
        BoundaryFunction::new(
            eval,
            side,
            Cone::forward(1).unwrap().with_shift(ell).unwrap(),
            0,
            BoundaryFamily::Rational { poles: vec![pole] },
            vec![pole],
        )
        .unwrap()
    };
    let flow = global_continue(
        &make(Side::Upper),
        &make(Side::Lower),
        1.5,
        &RegularizeOptions::default(),
    )
    .unwrap();
    let grid = rectangle_grid((-2.0, 2.0), (-0.6, 0.6), 9, 5);
    let rep = overlap_report(&flow.reg1, &flow.reg2, &grid, 1e-6).unwrap();
    assert!(!rep.passed);
    // u₁ − u₂ = −2πi δ_{0.5i}, so U₁ − U₂ = −2πi K_r(z − 0.5i).
    let oracle = grid
        .iter()
        .filter(|z| flow.reg1.contains(**z) && flow.reg2.contains(**z))
        .map(|z| 2.0 * PI * (0.25 / 1.5) * (1.0 / (PI * (z - pole) / 3.0).cosh()).norm())
        .fold(0.0, f64::max);
    assert!(
        (rep.max_deviation - oracle).abs() < 1e-8,
        "{} vs {oracle}",
        rep.max_deviation
    );
    assert!(rep.max_deviation > 1e-2);
}

#[test]
fn local_flow_matches_the_cauchy_hilbert_transform() {
    let w = C64::new(0.0, 0.3);
    let masses = vec![(c(1.0), w)];
    let ell = 0.5;
    let (f1, f2) = cauchy_hilbert(&masses, ell).unwrap();
    let carrier = CarrierSet::box1d(-0.1, 0.1, ell).unwrap();
    let flow = local_continue(&f1, &f2, &carrier, &masses, 1.5, &RegularizeOptions::default()).unwrap();
    assert!(flow.difference_check(&gaussians()[..3]).unwrap() < 1e-8);

    let oracle = |z: C64| cauchy_hilbert_value(&[(c(1.0), w)], z).unwrap();
    let pts = [
        C64::new(-1.0, 0.2),
        C64::new(2.0, -0.7),
        C64::new(0.5, 0.0),
        C64::new(-0.4, 1.5),
    ];
    for z in pts {
        for h in [&flow.h1, &flow.h2] {
            let v = h.eval(z).unwrap();
            assert!((v.value - oracle(z)).norm() < 1e-6, "{z}: {} vs {}", v.value, oracle(z));
        }
    }
    let xis = [-5.0, -3.0, -2.0, -1.5, -1.2, 1.2, 1.5, 2.0, 3.0, 5.0];
    let rep = probe_equality(&flow, &xis, &ProbeOptions::default(), Some(&oracle)).unwrap();
    for row in &rep.rows {
        assert!(row.passed, "{row:?}");
    }
    assert!(rep.passed);
    assert!(probe_equality(&flow, &[0.0], &ProbeOptions::default(), None).is_err());
}

//! Randomized property suites shared by the `properties` test target and
//! the acceptance runner. Every suite uses a fixed ChaCha seed.

#![allow(dead_code)]

use eow_core::fixtures::FunctionFixture;
use eow_core::geometry::CarrierSet;
use eow_core::kernels::{unit_kernel_1d, KernelSpec};
use eow_core::pipeline::{cauchy_riemann_residual, global_continue, local_continue, regularize, RegularizeOptions};
use eow_core::uhf::{apply, cauchy_round_trip, ApplyOptions, BoundaryFunction, Side, TestFunction, Ultrahyperfunction};
use eow_core::C64;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

pub const SEED: [u8; 32] = *b"edge-of-the-wedge-property-seed!";

pub fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &SEED))
}

/// A named suite: runs its cases and returns how many were executed.
pub struct Suite {
    pub name: &'static str,
    pub cases: u32,
    pub run: fn(u32) -> Result<u32, String>,
}

pub fn suites() -> Vec<Suite> {
    vec![
        Suite {
            name: "kernel symmetry",
            cases: 60,
            run: kernel_symmetry,
        },
        Suite {
            name: "contour independence",
            cases: 40,
            run: contour_independence,
        },
        Suite {
            name: "Cauchy-Hilbert round trip",
            cases: 40,
            run: cauchy_hilbert_round_trip,
        },
        Suite {
            name: "linearity",
            cases: 40,
            run: linearity,
        },
        Suite {
            name: "domain soundness",
            cases: 40,
            run: domain_soundness,
        },
        Suite {
            name: "Cauchy-Riemann residuals",
            cases: 30,
            run: cauchy_riemann,
        },
    ]
}

fn finish(
    result: Result<(), proptest::test_runner::TestError<impl std::fmt::Debug>>,
    cases: u32,
) -> Result<u32, String> {
    result.map(|_| cases).map_err(|e| e.to_string())
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn fail(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

/// `K(−z) = K(z)`, `K(z̄) = conj K(z)`, `K_r(rz) = K_1(z)/r`.
pub fn kernel_symmetry(cases: u32) -> Result<u32, String> {
    let strat = (-10.0..10.0f64, -0.9..0.9f64, 0.3..4.0f64);
    let res = runner(cases).run(&strat, |(x, y, r)| {
        let z = C64::new(x, y);
        let k = unit_kernel_1d(z);
        prop_assert!((unit_kernel_1d(-z) - k).norm() <= 1e-15 * k.norm().max(1e-300));
        prop_assert!((unit_kernel_1d(z.conj()) - k.conj()).norm() <= 1e-15 * k.norm().max(1e-300));
        let scaled = KernelSpec::closed_form(r).unwrap().eval(&[z * r]).unwrap().value;
        prop_assert!((scaled - k / r).norm() <= 1e-12 * k.norm() / r);
        Ok(())
    });
    finish(res, cases)
}

/// Entire polynomial data pairs identically at two heights inside the cone.
pub fn contour_independence(cases: u32) -> Result<u32, String> {
    let strat = (
        prop::collection::vec(-2.0..2.0f64, 1..4),
        0.6..3.0f64,
        0.6..3.0f64,
        -1.0..1.0f64,
        0.5..2.0f64,
    );
    let res = runner(cases).run(&strat, |(coeffs, h1, h2, center, width)| {
        let coeffs: Vec<C64> = coeffs.into_iter().map(c).collect();
        let f = BoundaryFunction::polynomial(coeffs, Side::Upper, 0.5).unwrap();
        let phi = TestFunction::gaussian_1d(center, width).unwrap();
        let at = |h: f64| {
            let u = Ultrahyperfunction::boundary(f.clone(), Some(vec![h])).unwrap();
            apply(&u, &phi, &ApplyOptions::default()).unwrap()
        };
        let (a, b) = (at(h1), at(h2));
        let tol = 1e-7 + a.error_estimate + b.error_estimate;
        prop_assert!(
            (a.value - b.value).norm() < tol,
            "{} vs {} (tol {tol})",
            a.value,
            b.value
        );
        Ok(())
    });
    finish(res, cases)
}

fn mass_strategy() -> impl Strategy<Value = Vec<(C64, C64)>> {
    prop::collection::vec((-2.0..2.0f64, -1.0..1.0f64, -0.5..0.5f64, -0.45..0.45f64), 1..4).prop_map(|v| {
        v.into_iter()
            .map(|(cr, ci, wr, wi)| (C64::new(cr, ci), C64::new(wr, wi)))
            .collect()
    })
}

/// `−∮_C F φ dz = Σ c_k φ(w_k)` for the Cauchy–Hilbert transform `F`.
pub fn cauchy_hilbert_round_trip(cases: u32) -> Result<u32, String> {
    let strat = (mass_strategy(), -1.0..1.0f64, 0.5..2.0f64);
    let res = runner(cases).run(&strat, |(masses, center, width)| {
        let phi = TestFunction::gaussian_1d(center, width).unwrap();
        let rt = cauchy_round_trip(&masses, &phi, None).map_err(|e| fail(e.to_string()))?;
        prop_assert!(rt.difference < 1e-7, "difference {}", rt.difference);
        Ok(())
    });
    finish(res, cases)
}

/// `apply` is linear in the functional and in the test function.
pub fn linearity(cases: u32) -> Result<u32, String> {
    let strat = (
        (-2.0..2.0f64, -2.0..2.0f64),
        (-2.0..2.0f64, -2.0..2.0f64),
        prop::collection::vec(-1.0..1.0f64, 3),
        prop::collection::vec(-1.0..1.0f64, 3),
        -1.0..1.0f64,
        0.5..2.0f64,
    );
    let res = runner(cases).run(&strat, |((ar, ai), (br, bi), p, q, center, width)| {
        let (a, b) = (C64::new(ar, ai), C64::new(br, bi));
        let f = BoundaryFunction::polynomial(p.iter().map(|x| c(*x)).collect(), Side::Upper, 0.5).unwrap();
        let u = Ultrahyperfunction::boundary(f, None).unwrap();
        let v =
            Ultrahyperfunction::point_masses_1d(&[(c(1.0), C64::new(q[0], 0.3 * q[1])), (c(q[2]), c(0.2))]).unwrap();
        let opts = ApplyOptions::default();
        let phi = TestFunction::gaussian_1d(center, width).unwrap();
        let combo = Ultrahyperfunction::combination(vec![(a, u.clone()), (b, v.clone())]).unwrap();
        let lhs = apply(&combo, &phi, &opts).unwrap().value;
        let rhs = a * apply(&u, &phi, &opts).unwrap().value + b * apply(&v, &phi, &opts).unwrap().value;
        prop_assert!((lhs - rhs).norm() <= 1e-9 * lhs.norm().max(1.0));

        // In φ: polynomial × Gaussian is linear in its coefficients.
        let cen = vec![c(center)];
        let pg = |coeffs: Vec<C64>| TestFunction::poly_gaussian(coeffs, cen.clone(), width).unwrap();
        let p1: Vec<C64> = p.iter().map(|x| c(*x)).collect();
        let p2: Vec<C64> = q.iter().map(|x| c(*x)).collect();
        let mix: Vec<C64> = p1.iter().zip(&p2).map(|(x, y)| a * x + b * y).collect();
        let lhs = apply(&u, &pg(mix), &opts).unwrap().value;
        let rhs = a * apply(&u, &pg(p1), &opts).unwrap().value + b * apply(&u, &pg(p2), &opts).unwrap().value;
        prop_assert!((lhs - rhs).norm() <= 1e-9 * lhs.norm().max(1.0), "{lhs} vs {rhs}");
        Ok(())
    });
    finish(res, cases)
}

/// Evaluators refuse points outside their tagged domains and accept the rest.
pub fn domain_soundness(cases: u32) -> Result<u32, String> {
    let f = BoundaryFunction::polynomial(vec![c(1.0), c(-1.0), c(0.5)], Side::Upper, 0.5).unwrap();
    let reg = regularize(
        &Ultrahyperfunction::boundary(f, None).unwrap(),
        1.5,
        &RegularizeOptions::default(),
    )
    .unwrap();
    let w = C64::new(0.0, 0.3);
    let fixture = FunctionFixture::CauchyHilbert {
        masses: vec![(c(1.0), w)],
    };
    let (f1, f2) = fixture.tube_pair(0.5).unwrap();
    let carrier = CarrierSet::box1d(-0.1, 0.1, 0.5).unwrap();
    let flow = local_continue(
        &f1,
        &f2,
        &carrier,
        &fixture.boundary_difference(),
        1.5,
        &RegularizeOptions::default(),
    )
    .unwrap();
    let quad = KernelSpec::quadrature(1, 1.0).unwrap();

    let strat = (-4.0..4.0f64, -4.0..4.0f64);
    let res = runner(cases).run(&strat, |(x, y)| {
        let z = C64::new(x, y);
        match reg.eval(z) {
            Ok(_) => prop_assert!(reg.contains(z)),
            Err(e) => prop_assert!(!reg.contains(z) && e.is_domain(), "{e}"),
        }
        match flow.h1.eval(z) {
            Ok(_) => prop_assert!(flow.h1.contains(z)),
            Err(e) => prop_assert!(!flow.h1.contains(z) && e.is_domain(), "{e}"),
        }
        let inside = y * y <= (1.0 - quad.eps_dom()) && x.abs() <= 10.0;
        match quad.eval(&[z]) {
            Ok(_) => prop_assert!(inside),
            Err(e) => prop_assert!(!inside || !e.is_domain(), "{e}"),
        }
        if !inside && y * y > 1.0 - quad.eps_dom() {
            prop_assert!(quad.eval(&[z]).unwrap_err().is_domain());
        }
        Ok(())
    });
    finish(res, cases)
}

/// Regularized and continued functions satisfy Cauchy–Riemann to 10⁻⁴.
pub fn cauchy_riemann(cases: u32) -> Result<u32, String> {
    let ell = 0.5;
    let poly = FunctionFixture::Poly {
        coeffs: vec![c(1.0), c(2.0), c(0.0), c(-1.0)],
    };
    let (p1, p2) = poly.tube_pair(ell).unwrap();
    let global = global_continue(&p1, &p2, 1.5, &RegularizeOptions::default()).unwrap();
    let w = C64::new(0.05, 0.3);
    let ch = FunctionFixture::CauchyHilbert {
        masses: vec![(c(1.0), w)],
    };
    let (f1, f2) = ch.tube_pair(ell).unwrap();
    let carrier = CarrierSet::box1d(-0.1, 0.1, ell).unwrap();
    let local = local_continue(
        &f1,
        &f2,
        &carrier,
        &ch.boundary_difference(),
        1.5,
        &RegularizeOptions::default(),
    )
    .unwrap();
    let step = 1e-3;

    let strat = (-3.0..3.0f64, -3.0..3.0f64);
    let res = runner(cases).run(&strat, |(x, y)| {
        let z = C64::new(x, y);
        let near = |g: &dyn Fn(C64) -> bool| {
            [c(step), c(-step), C64::new(0.0, step), C64::new(0.0, -step), c(0.0)]
                .iter()
                .all(|d| g(z + d))
        };
        if near(&|p| global.reg1.contains(p)) {
            let rep = cauchy_riemann_residual(|p| Ok(global.reg1.eval(p)?.value), &[z], step).unwrap();
            prop_assert!(rep.max_residual < 1e-4, "U1 at {z}: {}", rep.max_residual);
        }
        let rep = cauchy_riemann_residual(|p| Ok(global.h.eval(p)?.value), &[z], step).unwrap();
        prop_assert!(rep.max_residual < 1e-4, "H at {z}: {}", rep.max_residual);
        // Stay a little away from the pole of the common extension at w.
        if near(&|p| local.h1.contains(p)) && (z - w).norm() > 0.2 {
            let rep = cauchy_riemann_residual(|p| Ok(local.h1.eval(p)?.value), &[z], step).unwrap();
            prop_assert!(rep.max_residual < 1e-4, "H1 at {z}: {}", rep.max_residual);
        }
        Ok(())
    });
    finish(res, cases)
}

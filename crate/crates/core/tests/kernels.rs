//! Multi-dimensional kernel quadrature against radial reductions.

use std::f64::consts::PI;

use eow_core::kernels::{kernel_scaled, rapid_decrease_certificate, sphere_laplace, KernelSpec, Strategy};
use eow_core::quadrature::GaussLegendre;
use eow_core::C64;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `J₀(w) = π⁻¹ ∫₀^π cos(w sin θ) dθ` by the periodic trapezoid rule.
fn bessel_j0(w: C64) -> C64 {
    let m = 400;
    let h = PI / m as f64;
    (0..m).map(|k| (w * ((k as f64 + 0.5) * h).sin()).cos()).sum::<C64>() / m as f64
}

/// n = 2 radial form: `(2π)^{-2} ∫₀^∞ 2πρ J₀(ρ s) / I(ρ) dρ`, `s² = z·z`.
fn radial_kernel_2d(z: &[C64]) -> C64 {
    let s = (z[0] * z[0] + z[1] * z[1]).sqrt();
    let gl = GaussLegendre::new(20);
    let mut acc = C64::new(0.0, 0.0);
    let panels = 600;
    let top = 60.0;
    let w = top / panels as f64;
    for p in 0..panels {
        let lo = p as f64 * w;
        for (&x, &wt) in gl.nodes().iter().zip(gl.weights()) {
            let rho = lo + 0.5 * w * (x + 1.0);
            let i = sphere_laplace(&[rho, 0.0]);
            acc += bessel_j0(s * rho) * (2.0 * PI * rho / i) * (0.5 * w * wt);
        }
    }
    acc / (4.0 * PI * PI)
}

/// n = 3: `∫₀^∞ ρ² sin(ρs)/sinh ρ dρ = −(d/ds)² (π/2) tanh(πs/2)` gives
/// `K(z) = sech²(πs/2) tanh(πs/2) / (32 s)`.
fn closed_kernel_3d(z: &[C64]) -> C64 {
    let s = (z[0] * z[0] + z[1] * z[1] + z[2] * z[2]).sqrt();
    if s.norm() < 1e-8 {
        return C64::new(PI / 64.0, 0.0);
    }
    let u = s * (PI / 2.0);
    let sech = 1.0 / u.cosh();
    sech * sech * u.tanh() / (32.0 * s)
}

fn radial_kernel_3d(z: &[C64]) -> C64 {
    let s = (z[0] * z[0] + z[1] * z[1] + z[2] * z[2]).sqrt();
    let gl = GaussLegendre::new(20);
    let mut acc = C64::new(0.0, 0.0);
    let panels = 400;
    let w = 50.0 / panels as f64;
    for p in 0..panels {
        let lo = p as f64 * w;
        for (&x, &wt) in gl.nodes().iter().zip(gl.weights()) {
            let rho = lo + 0.5 * w * (x + 1.0);
            let sinc = if (s * rho).norm() < 1e-12 {
                C64::new(1.0, 0.0)
            } else {
                (s * rho).sin() / (s * rho)
            };
            acc += sinc * (4.0 * PI * rho * rho / sphere_laplace(&[rho, 0.0, 0.0])) * (0.5 * w * wt);
        }
    }
    acc / (8.0 * PI * PI * PI)
}

#[test]
fn two_dimensional_quadrature_matches_radial_integral() {
    let spec = KernelSpec::quadrature(2, 1.0).unwrap();
    assert_eq!(spec.strategy(), Strategy::FourierQuadrature);
    for z in [
        vec![c(0.0, 0.0), c(0.0, 0.0)],
        vec![c(0.7, 0.0), c(-0.4, 0.0)],
        vec![c(1.5, 0.2), c(0.3, -0.1)],
        vec![c(3.0, 0.0), c(2.0, 0.3)],
    ] {
        let got = spec.eval(&z).unwrap();
        let want = radial_kernel_2d(&z);
        assert!(
            (got.value - want).norm() < 1e-6 + got.error_estimate,
            "{z:?}: {} vs {want}",
            got.value
        );
    }
}

#[test]
fn three_dimensional_quadrature_matches_closed_and_radial_forms() {
    let spec = KernelSpec::quadrature(3, 1.0).unwrap();
    for z in [
        vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        vec![c(0.5, 0.1), c(-0.3, 0.0), c(0.2, -0.1)],
        vec![c(1.2, 0.0), c(0.0, 0.0), c(0.9, 0.2)],
    ] {
        let closed = closed_kernel_3d(&z);
        let radial = radial_kernel_3d(&z);
        assert!((closed - radial).norm() < 1e-9, "{closed} vs {radial}");
        let got = spec.eval(&z).unwrap();
        assert!((got.value - closed).norm() < 1e-6, "{z:?}: {} vs {closed}", got.value);
    }
}

#[test]
fn scaled_kernel_in_two_dimensions() {
    let z = [c(0.8, 0.1), c(-0.6, 0.0)];
    let k2 = kernel_scaled(&z, 2.0).unwrap();
    let k1 = kernel_scaled(&[z[0] / 2.0, z[1] / 2.0], 1.0).unwrap();
    assert!((k2 - k1 / 4.0).norm() < 1e-7);
}

#[test]
fn two_dimensional_kernel_decays_on_shells() {
    let spec = KernelSpec::quadrature(2, 1.0).unwrap().with_tolerance(1e-3).unwrap();
    let rep = rapid_decrease_certificate(&spec, 0.5, 4).unwrap();
    assert!(rep.decays, "{:?}", rep.violations);
}

use std::f64::consts::PI;

use crate::complex::norm;
use crate::quadrature::{sphere_average_real, GaussLegendre, SphereRule};

/// Surface measure of `S^{n−1}`.
pub fn sphere_measure(n: usize) -> f64 {
    match n {
        0 => 0.0,
        1 => 2.0,
        2 => 2.0 * PI,
        _ => 2.0 * PI * sphere_measure(n - 2) / (n as f64 - 2.0),
    }
}

/// `I(ξ) = ∫_{|ω|=1} e^{−⟨ω, ξ⟩} dω`.
///
/// Closed form for n = 1, equi-angular trapezoid for n = 2, rotation to the
/// polar axis plus Gauss–Legendre for n ≥ 3. Overflows to `+∞` once
/// `|ξ| ≳ 709`.
pub fn sphere_laplace(xi: &[f64]) -> f64 {
    let rho = norm(xi);
    sphere_laplace_scaled(xi.len(), rho) * rho.exp()
}

/// `e^{−ρ} I(ρ e)` for a unit vector `e`: bounded, positive and slowly varying.
pub fn sphere_laplace_scaled(n: usize, rho: f64) -> f64 {
    assert!(n >= 1, "dimension must be positive");
    let rho = rho.abs();
    match n {
        1 => 1.0 + (-2.0 * rho).exp(),
        2 => circle_scaled(rho),
        3 => polar_scaled(rho),
        _ => general_scaled(n, rho),
    }
}

/// `∫₀^{2π} e^{−ρ(1 + cos θ)} dθ` by the periodic trapezoid rule. The node
/// count keeps the aliasing term `I_N(ρ)/I_0(ρ) ≈ e^{−N²/2ρ}` below 1e-16.
fn circle_scaled(rho: f64) -> f64 {
    let count = 32usize.max((80.0 * rho).sqrt().ceil() as usize + 8);
    let step = 2.0 * PI / count as f64;
    (0..count)
        .map(|k| (-rho * (1.0 + (k as f64 * step).cos())).exp())
        .sum::<f64>()
        * step
}

/// `2π ∫_{−1}^{1} e^{−ρ(1 + μ)} dμ`, integrated in `s = ρ(1 + μ)` panels of
/// unit width where the integrand is not negligible.
fn polar_scaled(rho: f64) -> f64 {
    let gl = GaussLegendre::new(16);
    if rho < 0.5 {
        return 2.0 * PI * gl.integrate(-1.0, 1.0, |mu| (-rho * (1.0 + mu)).exp());
    }
    let upper = (2.0 * rho).min(45.0);
    let panels = upper.ceil() as usize;
    let s = gl.integrate_composite(0.0, upper, panels, |s| (-s).exp());
    2.0 * PI * s / rho
}

/// `|S^{n−2}| ∫₀^π e^{−ρ(1 + cos θ)} sin^{n−2} θ dθ` with panels refined
/// near θ = π where the weight concentrates.
fn general_scaled(n: usize, rho: f64) -> f64 {
    let gl = GaussLegendre::new(20);
    let width = (1.0 / rho.max(1e-12).sqrt()).min(PI / 4.0);
    let panels = (PI / width).ceil() as usize;
    let v = gl.integrate_composite(0.0, PI, panels, |th| {
        (-rho * (1.0 + th.cos())).exp() * th.sin().powi(n as i32 - 2)
    });
    sphere_measure(n - 1) * v
}

/// Brute-force `I(ξ)` on an explicit sphere rule.
pub fn sphere_laplace_on_rule(xi: &[f64], rule: &SphereRule) -> f64 {
    sphere_average_real(rule, |w| (-w.iter().zip(xi).map(|(a, b)| a * b).sum::<f64>()).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn one_dimensional_values() {
        assert_relative_eq!(sphere_laplace(&[0.0]), 2.0);
        assert_relative_eq!(sphere_laplace(&[1.0]), 2.0 * 1f64.cosh(), max_relative = 1e-15);
        assert_relative_eq!(sphere_laplace(&[-3.0]), 2.0 * 3f64.cosh(), max_relative = 1e-15);
    }

    #[test]
    fn three_dimensional_matches_sinh_form_and_product_grid() {
        for rho in [1e-3f64, 0.3, 1.0, 4.0, 30.0, 200.0] {
            let closed = 4.0 * PI * (1.0 - (-2.0 * rho).exp()) / (2.0 * rho);
            assert_relative_eq!(sphere_laplace_scaled(3, rho), closed, max_relative = 1e-13);
        }
        let dense = SphereRule::product(40, 80).unwrap();
        let brute = sphere_laplace_on_rule(&[1.0, 0.0, 0.0], &dense);
        assert_relative_eq!(brute, 4.0 * PI * 1f64.sinh(), max_relative = 1e-12);
        assert_relative_eq!(sphere_laplace(&[1.0, 0.0, 0.0]), brute, max_relative = 1e-12);
        assert_relative_eq!(sphere_laplace(&[0.0, 0.6, 0.8]), brute, max_relative = 1e-12);
    }

    #[test]
    fn circle_matches_bessel_series() {
        // 2π I₀(ρ) = 2π Σ (ρ/2)^{2k} / (k!)².
        for rho in [0.0f64, 0.5, 2.0, 10.0] {
            let mut term = 1.0;
            let mut sum = 1.0;
            for k in 1..200 {
                term *= (rho / 2.0).powi(2) / (k as f64 * k as f64);
                sum += term;
            }
            assert_relative_eq!(sphere_laplace(&[rho, 0.0]), 2.0 * PI * sum, max_relative = 1e-13);
        }
    }

    #[test]
    fn general_formula_reproduces_low_dimensions() {
        for rho in [0.2, 3.0, 40.0] {
            assert_relative_eq!(general_scaled(2, rho), circle_scaled(rho), max_relative = 1e-12);
            assert_relative_eq!(general_scaled(3, rho), polar_scaled(rho), max_relative = 1e-12);
        }
        assert_relative_eq!(sphere_measure(4), 2.0 * PI * PI, max_relative = 1e-15);
        assert_relative_eq!(sphere_laplace_scaled(4, 0.0), 2.0 * PI * PI, max_relative = 1e-12);
    }
}

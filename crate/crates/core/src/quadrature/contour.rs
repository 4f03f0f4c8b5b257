use rayon::prelude::*;

use crate::complex::C64;
use crate::error::{Error, Result};

/// Horizontal product contour `∏_j {x + iη_j : |x − c_j| ≤ X}` sampled with
/// a uniform step, traversed left to right in every coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourSpec {
    pub heights: Vec<f64>,
    /// Real centre of the truncation window in each coordinate.
    pub centers: Vec<f64>,
    pub truncation: f64,
    pub step: f64,
    /// Largest accepted tail estimate before the integral is rejected.
    pub tail_tolerance: f64,
}

impl ContourSpec {
    pub fn new(heights: Vec<f64>, truncation: f64, step: f64) -> Result<Self> {
        if heights.is_empty() {
            return Err(Error::invalid("contour needs at least one coordinate"));
        }
        if !(step > 0.0) || !(truncation > 0.0) {
            return Err(Error::invalid("contour truncation and step must be positive"));
        }
        let ratio = truncation / step;
        if (ratio - ratio.round()).abs() > 1e-9 * ratio.max(1.0) {
            return Err(Error::invalid(format!("truncation/step = {ratio} is not an integer")));
        }
        let n = heights.len();
        Ok(ContourSpec {
            heights,
            centers: vec![0.0; n],
            truncation,
            step,
            tail_tolerance: 1e-10,
        })
    }

    /// Builds a spec whose step is the largest value `≤ max_step` dividing `truncation`.
    pub fn fitted(heights: Vec<f64>, truncation: f64, max_step: f64) -> Result<Self> {
        if !(max_step > 0.0) || !(truncation > 0.0) {
            return Err(Error::invalid("contour truncation and step must be positive"));
        }
        let steps = (truncation / max_step).ceil().max(1.0);
        Self::new(heights, truncation, truncation / steps)
    }

    pub fn with_centers(mut self, centers: Vec<f64>) -> Self {
        assert_eq!(centers.len(), self.heights.len());
        self.centers = centers;
        self
    }

    pub fn with_tail_tolerance(mut self, tol: f64) -> Self {
        self.tail_tolerance = tol;
        self
    }

    pub fn dim(&self) -> usize {
        self.heights.len()
    }

    /// Number of steps on each side of the centre.
    pub fn half_steps(&self) -> usize {
        (self.truncation / self.step).round() as usize
    }
}

/// Quadrature value plus the two error indicators attached to it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: C64,
    /// `|Q_h − Q_{2h}|`.
    pub halving_error: f64,
    /// Integrand magnitude on the outermost shell times its extent.
    pub tail_estimate: f64,
    /// `∫|f|` under the same rule; bounds cancellation error.
    pub magnitude: f64,
}

impl Integral {
    /// Halving difference, tail, and a rounding allowance of `8ε∫|f|`.
    pub fn error_estimate(&self) -> f64 {
        self.halving_error + self.tail_estimate + 8.0 * f64::EPSILON * self.magnitude
    }
}

/// Rectangle (trapezoid) rule over a truncated horizontal product contour.
pub fn line_integral<F>(mut f: F, contour: &ContourSpec) -> Result<Integral>
where
    F: FnMut(&[C64]) -> C64,
{
    let n = contour.dim();
    let m = contour.half_steps();
    let per_axis = 2 * m + 1;
    let h = contour.step;
    let total = per_axis
        .checked_pow(n as u32)
        .filter(|&t| t <= 400_000_000)
        .ok_or_else(|| Error::invalid("contour grid too large"))?;

    let mut fine = C64::new(0.0, 0.0);
    let mut coarse = C64::new(0.0, 0.0);
    let mut shell_max: f64 = 0.0;
    let mut abs_sum = 0.0;
    let mut idx = vec![0usize; n];
    let mut z = vec![C64::new(0.0, 0.0); n];
    for _ in 0..total {
        let mut w_fine = 1.0;
        let mut w_coarse = 1.0;
        let mut on_shell = false;
        for j in 0..n {
            let k = idx[j];
            let x = contour.centers[j] - contour.truncation + k as f64 * h;
            z[j] = C64::new(x, contour.heights[j]);
            let end = k == 0 || k == per_axis - 1;
            on_shell |= end;
            w_fine *= if end { 0.5 } else { 1.0 };
            w_coarse *= if k % 2 == 1 {
                0.0
            } else if end {
                0.5
            } else {
                1.0
            };
        }
        let v = f(&z);
        if !v.is_finite() {
            return Err(Error::Evaluation(format!("non-finite integrand at {z:?}")));
        }
        fine += v * w_fine;
        abs_sum += v.norm() * w_fine;
        if w_coarse != 0.0 {
            coarse += v * w_coarse;
        }
        if on_shell {
            shell_max = shell_max.max(v.norm());
        }
        for j in (0..n).rev() {
            idx[j] += 1;
            if idx[j] < per_axis {
                break;
            }
            idx[j] = 0;
        }
    }
    let cell = h.powi(n as i32);
    let fine = fine * cell;
    let coarse = coarse * cell * 2f64.powi(n as i32);
    let extent = (2.0 * contour.truncation).powi(n as i32 - 1);
    let tail = shell_max * extent;
    if tail > contour.tail_tolerance {
        return Err(Error::Accuracy {
            estimate: tail,
            tolerance: contour.tail_tolerance,
            context: "contour truncation tail".into(),
        });
    }
    Ok(Integral {
        value: fine,
        halving_error: (fine - coarse).norm(),
        tail_estimate: tail,
        magnitude: abs_sum * cell,
    })
}

/// Parallel variant of [`line_integral`] for fallible, thread-safe
/// integrands; the first evaluation error is returned.
pub fn line_integral_par<F>(f: F, contour: &ContourSpec) -> Result<Integral>
where
    F: Fn(&[C64]) -> Result<C64> + Sync,
{
    let n = contour.dim();
    let per_axis = 2 * contour.half_steps() + 1;
    let total = per_axis
        .checked_pow(n as u32)
        .filter(|&t| t <= 50_000_000)
        .ok_or_else(|| Error::invalid("contour grid too large"))?;
    let point = |mut i: usize| -> Vec<C64> {
        let mut z = vec![C64::new(0.0, 0.0); n];
        for j in (0..n).rev() {
            let k = i % per_axis;
            i /= per_axis;
            let x = contour.centers[j] - contour.truncation + k as f64 * contour.step;
            z[j] = C64::new(x, contour.heights[j]);
        }
        z
    };
    let values: Vec<C64> = (0..total)
        .into_par_iter()
        .map(|i| f(&point(i)))
        .collect::<Result<_>>()?;
    let mut seen = 0;
    line_integral(
        |_| {
            // Visits points in the same row-major order as `point`.
            let v = values[seen];
            seen += 1;
            v
        },
        contour,
    )
}

/// Composite trapezoid rule on `[a, b]` with `intervals` (made even) pieces.
/// Returns the value and the step-halving error estimate.
pub fn trapezoid<F: FnMut(f64) -> C64>(a: f64, b: f64, intervals: usize, mut f: F) -> (C64, f64) {
    let m = intervals.max(2).next_multiple_of(2);
    let h = (b - a) / m as f64;
    let mut fine = C64::new(0.0, 0.0);
    let mut coarse = C64::new(0.0, 0.0);
    for k in 0..=m {
        let w = if k == 0 || k == m { 0.5 } else { 1.0 };
        let v = f(a + k as f64 * h) * w;
        fine += v;
        if k % 2 == 0 {
            coarse += v;
        }
    }
    let fine = fine * h;
    let coarse = coarse * (2.0 * h);
    (fine, (fine - coarse).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const SQRT_PI: f64 = 1.772_453_850_905_516;

    #[test]
    fn gaussian_on_real_line() {
        let c = ContourSpec::new(vec![0.0], 8.0, 0.01).unwrap();
        let r = line_integral(|z| (-z[0] * z[0]).exp(), &c).unwrap();
        assert_abs_diff_eq!(r.value.re, SQRT_PI, epsilon = 1e-10);
        assert_abs_diff_eq!(r.value.im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn gaussian_shifted_contour_gives_same_value() {
        let c0 = ContourSpec::new(vec![0.0], 8.0, 0.01).unwrap();
        let c1 = ContourSpec::new(vec![1.0], 8.0, 0.01).unwrap();
        let f = |z: &[C64]| (-z[0] * z[0]).exp();
        let a = line_integral(f, &c0).unwrap();
        let b = line_integral(f, &c1).unwrap();
        assert!((a.value - b.value).norm() < a.error_estimate() + b.error_estimate() + 1e-12);
        assert_abs_diff_eq!(b.value.re, SQRT_PI, epsilon = 1e-10);
    }

    #[test]
    fn product_gaussian_in_two_variables() {
        let c = ContourSpec::new(vec![0.0, 0.0], 8.0, 0.02).unwrap();
        let r = line_integral(|z| (-z[0] * z[0] - z[1] * z[1]).exp(), &c).unwrap();
        assert_abs_diff_eq!(r.value.re, std::f64::consts::PI, epsilon = 1e-8);
    }

    #[test]
    fn rejects_non_integer_ratio_and_slow_tails() {
        assert!(ContourSpec::new(vec![0.0], 1.0, 0.3).is_err());
        let c = ContourSpec::new(vec![0.0], 2.0, 0.01).unwrap();
        let err = line_integral(|z| (-z[0] * z[0]).exp(), &c).unwrap_err();
        assert!(matches!(err, Error::Accuracy { .. }));
    }

    #[test]
    fn nan_samples_are_reported() {
        let c = ContourSpec::new(vec![0.0], 1.0, 0.5).unwrap();
        let err = line_integral(|_| C64::new(f64::NAN, 0.0), &c).unwrap_err();
        assert!(matches!(err, Error::Evaluation(_)));
    }

    #[test]
    fn halving_reduces_error_by_at_least_four() {
        // A smooth decaying integrand with a finite analyticity strip so the
        // rule error is visible at coarse steps.
        let exact = std::f64::consts::PI; // ∫ 1/(1+x²)
        let f = |x: f64| C64::new(1.0 / (1.0 + x * x), 0.0);
        let tail = 2.0 / 400.0; // ∫_{|x|>400} x^{-2}
        let e1 = (trapezoid(-400.0, 400.0, 800, f).0.re + tail - exact).abs();
        let e2 = (trapezoid(-400.0, 400.0, 1600, f).0.re + tail - exact).abs();
        assert!(e1 / e2 >= 4.0, "ratio {}", e1 / e2);
    }

    #[test]
    fn parallel_variant_matches_sequential() {
        let c = ContourSpec::new(vec![0.3, -0.2], 6.0, 0.05)
            .unwrap()
            .with_centers(vec![0.5, -1.0]);
        let f = |z: &[C64]| (-(z[0] - 0.5).powi(2) - 2.0 * (z[1] + 1.0).powi(2)).exp() * (z[0] + z[1] * 3.0);
        let a = line_integral(f, &c).unwrap();
        let b = line_integral_par(|z| Ok(f(z)), &c).unwrap();
        assert_eq!(a, b);
        let err = line_integral_par(|_| Err(Error::Pole("x".into())), &c).unwrap_err();
        assert!(matches!(err, Error::Pole(_)));
    }
}

use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, OnceLock};

use rayon::prelude::*;
use serde::Serialize;

use super::laplace::{sphere_laplace_scaled, sphere_measure};
use crate::complex::{im_norm, re_norm, sech, C64, I};
use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

pub const DEFAULT_EPS_DOM: f64 = 0.05;

/// Half-width of the strip around ℝⁿ in which `1/I(ξ)` stays analytic:
/// the first zero of `cos`, `J₀` and `sin(ρ)/ρ` along the imaginary axis.
const ANALYTIC_WIDTH: [f64; 3] = [PI / 2.0, 2.404_825_557_695_773, PI];

/// Largest `|Im w|·Ξ` accepted before the separable sums risk overflow.
const MAX_GROWTH_EXPONENT: f64 = 600.0;
const MAX_TRUNCATION: f64 = 20_000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    ClosedForm1d,
    FourierQuadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelValue {
    pub value: C64,
    /// Step-halving difference plus truncation tail (0 for the closed form).
    pub error_estimate: f64,
}

/// Configuration of `K_r(z) = r^{−n} K(z/r)`,
/// `K(z) = (2π)^{−n} ∫ e^{i⟨z, ξ⟩} / I(ξ) dξ`.
///
/// `truncation` (Ξ) and `step` (h) are in units of the unscaled variable
/// `w = z/r`. They are derived from the expected extent of `Re w` and
/// `Im w` and the tolerance unless overridden.
#[derive(Clone)]
pub struct KernelSpec {
    n: usize,
    r: f64,
    strategy: Strategy,
    truncation: f64,
    step: f64,
    eps_dom: f64,
    tolerance: f64,
    re_extent: f64,
    im_extent: f64,
    table: Arc<OnceLock<Vec<f64>>>,
}

impl fmt::Debug for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KernelSpec")
            .field("n", &self.n)
            .field("r", &self.r)
            .field("strategy", &self.strategy)
            .field("truncation", &self.truncation)
            .field("step", &self.step)
            .field("eps_dom", &self.eps_dom)
            .field("tolerance", &self.tolerance)
            .finish()
    }
}

impl KernelSpec {
    /// `n = 1`, `K_r(z) = (4r)^{−1} sech(πz/2r)`.
    pub fn closed_form(r: f64) -> Result<Self> {
        let mut spec = Self::build(1, r, Strategy::ClosedForm1d)?;
        spec.retune()?;
        Ok(spec)
    }

    /// Tensor-grid Fourier quadrature for `n ∈ {1, 2, 3}`.
    pub fn quadrature(n: usize, r: f64) -> Result<Self> {
        if !(1..=3).contains(&n) {
            return Err(Error::invalid(format!(
                "kernel quadrature supports n = 1, 2, 3 (got {n})"
            )));
        }
        let mut spec = Self::build(n, r, Strategy::FourierQuadrature)?;
        match n {
            1 => {
                spec.tolerance = 1e-10;
                spec.re_extent = 10.0;
                spec.im_extent = 0.9;
            }
            2 => {
                spec.tolerance = 1e-6;
                spec.re_extent = 10.0;
                spec.im_extent = 0.5;
            }
            _ => {
                spec.tolerance = 1e-6;
                spec.re_extent = 2.0;
                spec.im_extent = 0.3;
            }
        }
        spec.retune()?;
        Ok(spec)
    }

    /// Closed form for n = 1, quadrature otherwise.
    pub fn standard(n: usize, r: f64) -> Result<Self> {
        if n == 1 {
            Self::closed_form(r)
        } else {
            Self::quadrature(n, r)
        }
    }

    fn build(n: usize, r: f64, strategy: Strategy) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::invalid(format!("kernel scale must be positive (got {r})")));
        }
        Ok(KernelSpec {
            n,
            r,
            strategy,
            truncation: 0.0,
            step: 0.0,
            eps_dom: DEFAULT_EPS_DOM,
            tolerance: 1e-10,
            re_extent: 10.0,
            im_extent: 0.9,
            table: Arc::new(OnceLock::new()),
        })
    }

    fn retune(&mut self) -> Result<()> {
        let d = ANALYTIC_WIDTH[self.n.min(3) - 1];
        self.step = PI / (self.re_extent + 40.0 / d);
        self.truncation = truncation_radius(self.n, self.im_extent, self.tolerance / 10.0)?;
        self.table = Arc::new(OnceLock::new());
        Ok(())
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Result<Self> {
        if !(tolerance > 0.0) {
            return Err(Error::invalid("kernel tolerance must be positive"));
        }
        self.tolerance = tolerance;
        self.retune()?;
        Ok(self)
    }

    /// Largest `|Re z/r|` the step is tuned for.
    pub fn with_re_extent(mut self, extent: f64) -> Result<Self> {
        if !(extent >= 0.0) {
            return Err(Error::invalid("re extent must be nonnegative"));
        }
        self.re_extent = extent;
        self.retune()?;
        Ok(self)
    }

    /// Largest `|Im z/r|` the truncation radius is tuned for.
    pub fn with_im_extent(mut self, extent: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&extent) {
            return Err(Error::invalid("im extent must lie in [0, 1)"));
        }
        self.im_extent = extent;
        self.retune()?;
        Ok(self)
    }

    pub fn with_step(mut self, step: f64) -> Result<Self> {
        if !(step > 0.0) {
            return Err(Error::invalid("kernel step must be positive"));
        }
        self.step = step;
        self.table = Arc::new(OnceLock::new());
        Ok(self)
    }

    pub fn with_truncation(mut self, truncation: f64) -> Result<Self> {
        if !(truncation > 0.0) {
            return Err(Error::invalid("kernel truncation must be positive"));
        }
        self.truncation = truncation;
        self.table = Arc::new(OnceLock::new());
        Ok(self)
    }

    pub fn with_eps_dom(mut self, eps: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&eps) {
            return Err(Error::invalid("domain margin must lie in [0, 1)"));
        }
        self.eps_dom = eps;
        Ok(self)
    }

    /// Same configuration at a different scale.
    pub fn rescaled(&self, r: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::invalid(format!("kernel scale must be positive (got {r})")));
        }
        let mut out = self.clone();
        out.r = r;
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn truncation(&self) -> f64 {
        self.truncation
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn eps_dom(&self) -> f64 {
        self.eps_dom
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Domain test with safety margin. The closed form accepts
    /// `|Im w|² ≤ 1 − ε + |Re w|²`; the Fourier integral only converges for
    /// `|Im w| < 1` and accepts `|Im w|² ≤ 1 − ε`.
    pub fn in_domain(&self, z: &[C64]) -> bool {
        let y = im_norm(z) / self.r;
        let x = re_norm(z) / self.r;
        match self.strategy {
            Strategy::ClosedForm1d => y * y <= 1.0 - self.eps_dom + x * x,
            Strategy::FourierQuadrature => y * y <= 1.0 - self.eps_dom,
        }
    }

    pub fn eval(&self, z: &[C64]) -> Result<KernelValue> {
        if z.len() != self.n {
            return Err(Error::invalid(format!(
                "kernel of dimension {} evaluated at a point of dimension {}",
                self.n,
                z.len()
            )));
        }
        if z.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("kernel argument is not finite"));
        }
        if !self.in_domain(z) {
            return Err(Error::domain(format!(
                "kernel argument {z:?} outside the holomorphy margin (r = {}, ε = {})",
                self.r, self.eps_dom
            )));
        }
        let scale = self.r.powi(-(self.n as i32));
        let w: Vec<C64> = z.iter().map(|c| c / self.r).collect();
        match self.strategy {
            Strategy::ClosedForm1d => Ok(KernelValue {
                value: unit_kernel_1d(w[0]) * scale,
                error_estimate: 0.0,
            }),
            Strategy::FourierQuadrature => {
                let q = self.fourier(&w)?;
                Ok(KernelValue {
                    value: q.value * scale,
                    error_estimate: q.error_estimate * scale,
                })
            }
        }
    }

    fn half_steps(&self) -> usize {
        (self.truncation / self.step).floor() as usize
    }

    fn table(&self) -> &[f64] {
        self.table.get_or_init(|| {
            let m = self.half_steps();
            let h = self.step;
            let n = self.n;
            if n == 1 {
                (0..=m).map(|j| 1.0 / sphere_laplace_scaled(1, j as f64 * h)).collect()
            } else {
                (0..=m * m)
                    .into_par_iter()
                    .map(|s| {
                        let rho = h * (s as f64).sqrt();
                        (-rho).exp() / sphere_laplace_scaled(n, rho)
                    })
                    .collect()
            }
        })
    }

    fn fourier(&self, w: &[C64]) -> Result<KernelValue> {
        let y = im_norm(w);
        let m = self.half_steps();
        if m < 2 {
            return Err(Error::invalid("kernel truncation shorter than two steps"));
        }
        let h = self.step;
        let xi_max = m as f64 * h;
        if self.n > 1 && y * xi_max > MAX_GROWTH_EXPONENT {
            return Err(Error::Accuracy {
                estimate: f64::INFINITY,
                tolerance: self.tolerance,
                context: format!("|Im w|·Ξ = {:.1} overflows the kernel grid", y * xi_max),
            });
        }
        let tail = radial_tail(self.n, y, xi_max);
        let table = self.table();
        let (fine, coarse) = match self.n {
            1 => sum_1d(w[0], h, m, table),
            2 => sum_2d(w, h, m, table),
            _ => sum_3d(w, h, m, table),
        };
        let norm = (2.0 * PI).powi(-(self.n as i32));
        let fine = fine * h.powi(self.n as i32) * norm;
        let coarse = coarse * (2.0 * h).powi(self.n as i32) * norm;
        if !fine.is_finite() {
            return Err(Error::Evaluation(format!("kernel quadrature overflowed at {w:?}")));
        }
        let err = (fine - coarse).norm() + tail;
        if err > self.tolerance {
            return Err(Error::Accuracy {
                estimate: err,
                tolerance: self.tolerance,
                context: format!("kernel quadrature at w = {w:?}"),
            });
        }
        Ok(KernelValue {
            value: fine,
            error_estimate: err,
        })
    }
}

fn sum_1d(w: C64, h: f64, m: usize, table: &[f64]) -> (C64, C64) {
    let mut fine = C64::new(0.0, 0.0);
    let mut coarse = C64::new(0.0, 0.0);
    for j in -(m as i64)..=(m as i64) {
        let xi = j as f64 * h;
        let term = (I * w * xi - xi.abs()).exp() * table[j.unsigned_abs() as usize];
        fine += term;
        if j % 2 == 0 {
            coarse += term;
        }
    }
    (fine, coarse)
}

fn phases(wj: C64, h: f64, m: usize) -> Vec<C64> {
    (0..=2 * m)
        .map(|k| (I * wj * ((k as f64 - m as f64) * h)).exp())
        .collect()
}

fn sum_2d(w: &[C64], h: f64, m: usize, table: &[f64]) -> (C64, C64) {
    let a = phases(w[0], h, m);
    let b = phases(w[1], h, m);
    let mi = m as i64;
    let mut fine = C64::new(0.0, 0.0);
    let mut coarse = C64::new(0.0, 0.0);
    for j in -mi..=mi {
        let jj = j * j;
        let kmax = isqrt(mi * mi - jj);
        let mut inner = C64::new(0.0, 0.0);
        let mut inner_even = C64::new(0.0, 0.0);
        for k in -kmax..=kmax {
            let t = b[(k + mi) as usize] * table[(jj + k * k) as usize];
            inner += t;
            if k % 2 == 0 {
                inner_even += t;
            }
        }
        let aj = a[(j + mi) as usize];
        fine += aj * inner;
        if j % 2 == 0 {
            coarse += aj * inner_even;
        }
    }
    (fine, coarse)
}

fn sum_3d(w: &[C64], h: f64, m: usize, table: &[f64]) -> (C64, C64) {
    let a = phases(w[0], h, m);
    let b = phases(w[1], h, m);
    let c = phases(w[2], h, m);
    let mi = m as i64;
    let mut fine = C64::new(0.0, 0.0);
    let mut coarse = C64::new(0.0, 0.0);
    for j in -mi..=mi {
        let jj = j * j;
        let kmax = isqrt(mi * mi - jj);
        let mut mid = C64::new(0.0, 0.0);
        let mut mid_even = C64::new(0.0, 0.0);
        for k in -kmax..=kmax {
            let jk = jj + k * k;
            let lmax = isqrt(mi * mi - jk);
            let mut inner = C64::new(0.0, 0.0);
            let mut inner_even = C64::new(0.0, 0.0);
            for l in -lmax..=lmax {
                let t = c[(l + mi) as usize] * table[(jk + l * l) as usize];
                inner += t;
                if l % 2 == 0 {
                    inner_even += t;
                }
            }
            let bk = b[(k + mi) as usize];
            mid += bk * inner;
            if k % 2 == 0 {
                mid_even += bk * inner_even;
            }
        }
        let aj = a[(j + mi) as usize];
        fine += aj * mid;
        if j % 2 == 0 {
            coarse += aj * mid_even;
        }
    }
    (fine, coarse)
}

fn isqrt(v: i64) -> i64 {
    let mut s = (v as f64).sqrt() as i64;
    while s * s > v {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= v {
        s += 1;
    }
    s
}

/// `(2π)^{−n} |S^{n−1}| ∫_Ξ^∞ ρ^{n−1} e^{yρ} / I(ρ) dρ`, the mass of the
/// integrand bound outside the ball of radius Ξ.
pub(crate) fn radial_tail(n: usize, y: f64, xi_max: f64) -> f64 {
    let a = 1.0 - y;
    if a <= 0.0 {
        return f64::INFINITY;
    }
    let length = 60.0 / a;
    let gl = GaussLegendre::new(16);
    let v = gl.integrate_composite(xi_max, xi_max + length, 24, |rho| {
        rho.powi(n as i32 - 1) * (-a * rho).exp() / sphere_laplace_scaled(n, rho)
    });
    (2.0 * PI).powi(-(n as i32)) * sphere_measure(n) * v
}

/// Smallest Ξ (up to a 5% overshoot) with `radial_tail(n, y, Ξ) ≤ target`.
fn truncation_radius(n: usize, y: f64, target: f64) -> Result<f64> {
    let mut xi = 2.0;
    while radial_tail(n, y, xi) > target {
        xi *= 1.05;
        if xi > MAX_TRUNCATION {
            return Err(Error::Accuracy {
                estimate: radial_tail(n, y, xi),
                tolerance: target,
                context: format!("no kernel truncation radius reaches the tolerance at |Im w| = {y}"),
            });
        }
    }
    Ok(xi)
}

/// `(1/4) sech(πw/2)` without any domain check.
pub fn unit_kernel_1d(w: C64) -> C64 {
    sech(w * (PI / 2.0)) * 0.25
}

/// `K_r(z) = (4r)^{−1} sech(πz/2r)` on its full meromorphic domain,
/// refusing only points within `1e-12·r` of a pole `ir(1 + 2m)`.
pub fn kernel_meromorphic_1d(z: C64, r: f64) -> Result<C64> {
    if !(r > 0.0) {
        return Err(Error::invalid("kernel scale must be positive"));
    }
    let w = z / r;
    let m = ((w.im - 1.0) / 2.0).round();
    let pole = C64::new(0.0, 1.0 + 2.0 * m);
    if (w - pole).norm() < 1e-12 {
        return Err(Error::Pole(format!("{z} (pole {})", pole * r)));
    }
    Ok(unit_kernel_1d(w) / r)
}

/// The `2·count` poles `±ir(2m + 1)`, `0 ≤ m < count`, nearest first.
pub fn poles_1d(r: f64, count: usize) -> Vec<C64> {
    (0..count)
        .flat_map(|m| {
            let y = r * (2 * m + 1) as f64;
            [C64::new(0.0, y), C64::new(0.0, -y)]
        })
        .collect()
}

/// Kernel values at `points` (each a point of ℂⁿ), evaluated in parallel
/// and returned in input order.
pub fn kernel_table(spec: &KernelSpec, points: &[Vec<C64>]) -> Result<Vec<KernelValue>> {
    points.par_iter().map(|z| spec.eval(z)).collect()
}

pub fn kernel_eval(z: &[C64], spec: &KernelSpec) -> Result<KernelValue> {
    spec.eval(z)
}

/// `K_r(z) = r^{−n} K(z/r)` with the standard strategy for `n = z.len()`.
pub fn kernel_scaled(z: &[C64], r: f64) -> Result<C64> {
    Ok(KernelSpec::standard(z.len(), r)?.eval(z)?.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn closed_form_values() {
        let k1 = KernelSpec::closed_form(1.0).unwrap();
        assert_abs_diff_eq!(k1.eval(&[c(0.0, 0.0)]).unwrap().value.re, 0.25, epsilon = 1e-16);
        let k2 = KernelSpec::closed_form(2.0).unwrap();
        assert_abs_diff_eq!(k2.eval(&[c(0.0, 0.0)]).unwrap().value.re, 0.125, epsilon = 1e-16);
    }

    #[test]
    fn pole_proximity_blows_up() {
        let v = kernel_meromorphic_1d(c(0.0, 1.0 - 1e-3), 1.0).unwrap();
        assert!(v.norm() > 1e2, "{v}");
        assert!(matches!(kernel_meromorphic_1d(c(0.0, 3.0), 1.0), Err(Error::Pole(_))));
        assert!(matches!(kernel_meromorphic_1d(c(0.0, -2.0), 2.0), Err(Error::Pole(_))));
        assert_abs_diff_eq!(poles_1d(2.0, 3)[0].im, 2.0, epsilon = 0.0);
        assert_eq!(
            poles_1d(1.0, 2),
            vec![
                C64::new(0.0, 1.0),
                C64::new(0.0, -1.0),
                C64::new(0.0, 3.0),
                C64::new(0.0, -3.0)
            ]
        );
    }

    #[test]
    fn domain_is_refused_with_margin() {
        let k = KernelSpec::closed_form(1.0).unwrap();
        assert!(k.eval(&[c(0.0, 0.99)]).unwrap_err().is_domain());
        assert!(k.eval(&[c(3.0, 2.0)]).is_ok());
        let q = KernelSpec::quadrature(1, 1.0).unwrap();
        assert!(q.eval(&[c(3.0, 0.99)]).unwrap_err().is_domain());
    }

    #[test]
    fn quadrature_path_matches_closed_form_in_1d() {
        let q = KernelSpec::quadrature(1, 1.0).unwrap();
        for (x, y) in [(5.0, 0.0), (0.0, 0.0), (-2.5, 0.9), (10.0, -0.9), (1.0, 0.4)] {
            let got = q.eval(&[c(x, y)]).unwrap();
            let want = unit_kernel_1d(c(x, y));
            assert!((got.value - want).norm() < 1e-8, "{x} {y}: {} vs {want}", got.value);
            assert!(got.error_estimate <= 1e-10);
        }
    }

    #[test]
    fn kernel_mass_is_half_in_1d() {
        // (2π)^{-1}/I(0) · 2π = 1/2: the Fourier transform at 0 equals 1/I(0).
        let gl = GaussLegendre::new(20);
        let mass = gl.integrate_composite(-60.0, 60.0, 240, |x| unit_kernel_1d(c(x, 0.3)).re);
        assert_abs_diff_eq!(mass, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn isqrt_is_exact() {
        for v in 0..2000 {
            let s = isqrt(v);
            assert!(s * s <= v && (s + 1) * (s + 1) > v);
        }
    }
}

use std::f64::consts::PI;

use serde::Serialize;

use crate::complex::C64;
use crate::error::{Error, Result};

/// Closed-form families of entire functions decaying on every horizontal strip.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum TestFamily {
    /// `exp(−Σ ((z_j − c_j)/s)²)`.
    Gaussian { center: Vec<C64>, width: f64 },
    /// `P(z₁ − c₁) · exp(−Σ ((z_j − c_j)/s)²)` with ascending coefficients.
    PolyGaussian {
        coeffs: Vec<C64>,
        center: Vec<C64>,
        width: f64,
    },
    /// `E_ξ^t(z) = (4πt)^{−n/2} exp(−Σ (ξ_j − z_j)² / 4t)`, unconjugated square.
    HeatProbe { xi: Vec<f64>, t: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestFunction {
    pub family: TestFamily,
}

impl TestFunction {
    pub fn gaussian(center: Vec<C64>, width: f64) -> Result<Self> {
        if center.is_empty() || !(width > 0.0) {
            return Err(Error::invalid("gaussian needs a nonempty centre and positive width"));
        }
        Ok(TestFunction {
            family: TestFamily::Gaussian { center, width },
        })
    }

    /// One-dimensional real-centred Gaussian.
    pub fn gaussian_1d(center: f64, width: f64) -> Result<Self> {
        Self::gaussian(vec![C64::new(center, 0.0)], width)
    }

    pub fn poly_gaussian(coeffs: Vec<C64>, center: Vec<C64>, width: f64) -> Result<Self> {
        if coeffs.is_empty() || center.is_empty() || !(width > 0.0) {
            return Err(Error::invalid(
                "polynomial×gaussian needs coefficients, a centre and positive width",
            ));
        }
        Ok(TestFunction {
            family: TestFamily::PolyGaussian { coeffs, center, width },
        })
    }

    pub fn heat_probe(xi: Vec<f64>, t: f64) -> Result<Self> {
        if xi.is_empty() || !(t > 0.0) {
            return Err(Error::invalid("heat probe needs a point and t > 0"));
        }
        Ok(TestFunction {
            family: TestFamily::HeatProbe { xi, t },
        })
    }

    pub fn dim(&self) -> usize {
        match &self.family {
            TestFamily::Gaussian { center, .. } | TestFamily::PolyGaussian { center, .. } => center.len(),
            TestFamily::HeatProbe { xi, .. } => xi.len(),
        }
    }

    pub fn eval(&self, z: &[C64]) -> C64 {
        match &self.family {
            TestFamily::Gaussian { center, width } => gaussian(z, center, *width),
            TestFamily::PolyGaussian { coeffs, center, width } => {
                let u = z[0] - center[0];
                let p = coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * u + c);
                p * gaussian(z, center, *width)
            }
            TestFamily::HeatProbe { xi, t } => {
                let s: C64 = xi.iter().zip(z).map(|(x, w)| (C64::new(*x, 0.0) - w).powi(2)).sum();
                (4.0 * PI * t).powf(-(xi.len() as f64) / 2.0) * (-s / (4.0 * t)).exp()
            }
        }
    }

    /// Real centre and width used to place quadrature windows.
    pub fn window(&self) -> (Vec<f64>, f64) {
        match &self.family {
            TestFamily::Gaussian { center, width } | TestFamily::PolyGaussian { center, width, .. } => {
                (center.iter().map(|c| c.re).collect(), *width)
            }
            TestFamily::HeatProbe { xi, t } => (xi.clone(), (4.0 * t).sqrt()),
        }
    }

    /// Imaginary offset of the Gaussian centre (0 for heat probes).
    pub fn center_im(&self) -> Vec<f64> {
        match &self.family {
            TestFamily::Gaussian { center, .. } | TestFamily::PolyGaussian { center, .. } => {
                center.iter().map(|c| c.im).collect()
            }
            TestFamily::HeatProbe { xi, .. } => vec![0.0; xi.len()],
        }
    }

    /// Sampled `‖φ‖^{T([−k,k]ⁿ), j} = sup {|z^p φ(z)| : |Im z_i| ≤ k, |p| ≤ j}`,
    /// bounding `|z^p|` by `max(1, |z|_∞)^j`.
    pub fn strip_norm(&self, k: f64, j: u32) -> f64 {
        let n = self.dim();
        let (center, width) = self.window();
        let shift = self.center_im().iter().fold(0.0f64, |a, b| a.max(b.abs()));
        let reach = center.iter().fold(0.0f64, |a, b| a.max(b.abs())) + 12.0 * width + (k + shift) * 2.0;
        let per_axis: usize = match n {
            1 => 801,
            2 => 81,
            _ => 21,
        };
        let ims = [-k, -0.5 * k, 0.0, 0.5 * k, k];
        let mut sup: f64 = 0.0;
        let total = per_axis.pow(n as u32);
        let mut z = vec![C64::new(0.0, 0.0); n];
        for idx in 0..total {
            let mut rem = idx;
            for zj in z.iter_mut() {
                let i = rem % per_axis;
                rem /= per_axis;
                zj.re = -reach + 2.0 * reach * i as f64 / (per_axis - 1) as f64;
            }
            for &y in &ims {
                for zj in z.iter_mut() {
                    zj.im = y;
                }
                let inf = z.iter().map(|c| c.re.abs().max(c.im.abs())).fold(1.0f64, f64::max);
                sup = sup.max(inf.powi(j as i32) * self.eval(&z).norm());
            }
        }
        sup
    }
}

fn gaussian(z: &[C64], center: &[C64], width: f64) -> C64 {
    let s: C64 = z.iter().zip(center).map(|(a, c)| ((a - c) / width).powi(2)).sum();
    (-s).exp()
}

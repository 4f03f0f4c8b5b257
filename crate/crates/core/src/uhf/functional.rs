use std::cell::RefCell;

use serde::Serialize;

use super::boundary::BoundaryFunction;
use super::test_function::TestFunction;
use crate::complex::C64;
use crate::error::{Error, Result};
use crate::quadrature::{line_integral, ContourSpec};

/// A tempered ultrahyperfunction in one of its computable representations.
#[derive(Debug, Clone)]
pub enum Ultrahyperfunction {
    /// `φ ↦ ∫_{∏ C^{η_j}} F(z) φ(z) dz`, contours left to right.
    Boundary { f: BoundaryFunction, height: Vec<f64> },
    /// `φ ↦ Σ c_k φ(w_k)`.
    PointMasses { dim: usize, masses: Vec<(C64, Vec<C64>)> },
    /// `Σ a_k u_k`.
    Combination { terms: Vec<(C64, Ultrahyperfunction)> },
}

impl Ultrahyperfunction {
    /// Boundary functional at height `height`, or `±(ℓ + 1)e` by default.
    pub fn boundary(f: BoundaryFunction, height: Option<Vec<f64>>) -> Result<Self> {
        let tube = f.tube_cone();
        let height = match height {
            Some(h) => h,
            None => tube
                .apex()
                .iter()
                .zip(f.cone().axis())
                .map(|(a, e)| a + tube_sign(&f) * e)
                .collect(),
        };
        if !tube.contains(&height)? {
            return Err(Error::invalid(format!(
                "contour height {height:?} is not inside the tube's cone"
            )));
        }
        Ok(Ultrahyperfunction::Boundary { f, height })
    }

    pub fn point_masses(masses: Vec<(C64, Vec<C64>)>) -> Result<Self> {
        let Some(first) = masses.first() else {
            return Err(Error::invalid(
                "use Ultrahyperfunction::zero for an empty point-mass list",
            ));
        };
        let dim = first.1.len();
        if dim == 0 || masses.iter().any(|(_, w)| w.len() != dim) {
            return Err(Error::invalid("point masses must share a positive dimension"));
        }
        Ok(Ultrahyperfunction::PointMasses { dim, masses })
    }

    /// One-dimensional point masses `Σ c_k δ_{w_k}`.
    pub fn point_masses_1d(masses: &[(C64, C64)]) -> Result<Self> {
        Self::point_masses(masses.iter().map(|(c, w)| (*c, vec![*w])).collect())
    }

    pub fn zero(dim: usize) -> Self {
        Ultrahyperfunction::PointMasses { dim, masses: vec![] }
    }

    pub fn combination(terms: Vec<(C64, Ultrahyperfunction)>) -> Result<Self> {
        let Some(first) = terms.first() else {
            return Err(Error::invalid("empty combination"));
        };
        let dim = first.1.dim();
        if terms.iter().any(|(_, u)| u.dim() != dim) {
            return Err(Error::invalid("combined functionals must share a dimension"));
        }
        Ok(Ultrahyperfunction::Combination { terms })
    }

    /// `self − other`.
    pub fn minus(&self, other: &Ultrahyperfunction) -> Result<Self> {
        Self::combination(vec![
            (C64::new(1.0, 0.0), self.clone()),
            (C64::new(-1.0, 0.0), other.clone()),
        ])
    }

    pub fn dim(&self) -> usize {
        match self {
            Ultrahyperfunction::Boundary { f, .. } => f.dim(),
            Ultrahyperfunction::PointMasses { dim, .. } => *dim,
            Ultrahyperfunction::Combination { terms } => terms[0].1.dim(),
        }
    }

    /// Flattened point masses, if the functional has no boundary part.
    pub fn as_point_masses(&self) -> Option<Vec<(C64, Vec<C64>)>> {
        match self {
            Ultrahyperfunction::Boundary { .. } => None,
            Ultrahyperfunction::PointMasses { masses, .. } => Some(masses.clone()),
            Ultrahyperfunction::Combination { terms } => {
                let mut out = Vec::new();
                for (a, u) in terms {
                    for (c, w) in u.as_point_masses()? {
                        out.push((a * c, w));
                    }
                }
                Some(out)
            }
        }
    }
}

fn tube_sign(f: &BoundaryFunction) -> f64 {
    match f.side() {
        super::boundary::Side::Upper => 1.0,
        super::boundary::Side::Lower => -1.0,
    }
}

/// Quadrature overrides for [`apply`].
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ApplyOptions {
    pub truncation: Option<f64>,
    pub step: Option<f64>,
    pub heights: Option<Vec<f64>>,
    pub tail_tolerance: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Applied {
    pub value: C64,
    pub error_estimate: f64,
}

/// Default contour window for `F·φ`: `X = 12·max(1, width)` about the real
/// centre of `φ`, and `h = min(0.01, width/8, d/6)` with `d` the distance
/// from the contour to the nearest singular point of `F`.
pub fn default_window(f: &BoundaryFunction, phi: &TestFunction, heights: &[f64]) -> (f64, f64) {
    let (_, width) = phi.window();
    let mut h = 0.01f64.min(width / 8.0);
    if f.dim() == 1 {
        let d = f
            .singularities()
            .iter()
            .map(|s| (s.im - heights[0]).abs())
            .fold(f64::INFINITY, f64::min);
        h = h.min(d / 6.0);
    }
    (12.0 * width.max(1.0), h)
}

pub fn apply(u: &Ultrahyperfunction, phi: &TestFunction, opts: &ApplyOptions) -> Result<Applied> {
    if u.dim() != phi.dim() {
        return Err(Error::invalid("functional and test function dimensions differ"));
    }
    match u {
        Ultrahyperfunction::PointMasses { masses, .. } => {
            let value = masses.iter().map(|(c, w)| c * phi.eval(w)).sum();
            Ok(Applied {
                value,
                error_estimate: 0.0,
            })
        }
        Ultrahyperfunction::Combination { terms } => {
            let mut value = C64::new(0.0, 0.0);
            let mut err = 0.0;
            for (a, v) in terms {
                let r = apply(v, phi, opts)?;
                value += a * r.value;
                err += a.norm() * r.error_estimate;
            }
            Ok(Applied {
                value,
                error_estimate: err,
            })
        }
        Ultrahyperfunction::Boundary { f, height } => {
            let heights = opts.heights.clone().unwrap_or_else(|| height.clone());
            if !f.tube_cone().contains(&heights)? {
                return Err(Error::invalid(format!(
                    "contour height {heights:?} is outside the tube"
                )));
            }
            let max_height = heights.iter().fold(0.0f64, |a, b| a.max(b.abs()));
            if !phi.strip_norm(max_height, 0).is_finite() {
                return Err(Error::invalid(
                    "test function strip norm is not finite at the contour height",
                ));
            }
            let (x_def, h_def) = default_window(f, phi, &heights);
            let truncation = opts.truncation.unwrap_or(x_def);
            let step = opts.step.unwrap_or(h_def);
            let (center, _) = phi.window();
            let mut spec = ContourSpec::fitted(heights, truncation, step)?.with_centers(center);
            if let Some(t) = opts.tail_tolerance {
                spec = spec.with_tail_tolerance(t);
            }
            let failure = RefCell::new(None);
            let q = line_integral(
                |z| match f.eval_raw(z) {
                    Ok(v) => v * phi.eval(z),
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                        C64::new(f64::NAN, 0.0)
                    }
                },
                &spec,
            );
            if let Some(e) = failure.into_inner() {
                return Err(e);
            }
            let q = q?;
            Ok(Applied {
                value: q.value,
                error_estimate: q.error_estimate(),
            })
        }
    }
}

use serde::Serialize;

use crate::complex::{dot, norm};
use crate::error::{Error, Result};

/// `Γ = ℓe + V₊` with `V₊ = {y : ⟨y, e⟩ > |y − ⟨y, e⟩e|}`, or its negative.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cone {
    axis: Vec<f64>,
    shift: f64,
    negated: bool,
}

impl Cone {
    /// `V₊` in ℝⁿ with axis `(1, 0, …, 0)`.
    pub fn forward(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("cone dimension must be positive"));
        }
        let mut axis = vec![0.0; n];
        axis[0] = 1.0;
        Ok(Cone {
            axis,
            shift: 0.0,
            negated: false,
        })
    }

    pub fn with_axis(mut self, axis: Vec<f64>) -> Result<Self> {
        let len = norm(&axis);
        if axis.len() != self.dim() || !(len > 0.0) {
            return Err(Error::invalid(
                "cone axis must be a nonzero vector of the cone's dimension",
            ));
        }
        self.axis = axis.iter().map(|a| a / len).collect();
        Ok(self)
    }

    pub fn with_shift(mut self, shift: f64) -> Result<Self> {
        if !(shift >= 0.0) {
            return Err(Error::invalid("cone shift must be nonnegative"));
        }
        self.shift = shift;
        Ok(self)
    }

    /// `−Γ`.
    pub fn negated(&self) -> Self {
        Cone {
            negated: !self.negated,
            ..self.clone()
        }
    }

    pub fn dim(&self) -> usize {
        self.axis.len()
    }

    pub fn axis(&self) -> &[f64] {
        &self.axis
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn is_negated(&self) -> bool {
        self.negated
    }

    /// The vertex `±ℓe`.
    pub fn apex(&self) -> Vec<f64> {
        let s = if self.negated { -self.shift } else { self.shift };
        self.axis.iter().map(|a| s * a).collect()
    }

    fn check(&self, y: &[f64]) -> Result<()> {
        if y.len() != self.dim() {
            return Err(Error::invalid(format!(
                "point of dimension {} tested against a cone in dimension {}",
                y.len(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// Axial coordinate `t` and transverse radius `ρ` of `y` relative to the apex.
    fn split(&self, y: &[f64]) -> (f64, f64, Vec<f64>) {
        let sign = if self.negated { -1.0 } else { 1.0 };
        let base: Vec<f64> = y
            .iter()
            .zip(&self.axis)
            .map(|(v, a)| sign * v - self.shift * a)
            .collect();
        let t = dot(&base, &self.axis);
        let transverse: Vec<f64> = base.iter().zip(&self.axis).map(|(b, a)| b - t * a).collect();
        (t, norm(&transverse), transverse)
    }

    /// Open-cone membership.
    pub fn contains(&self, y: &[f64]) -> Result<bool> {
        self.check(y)?;
        let (t, rho, _) = self.split(y);
        Ok(t > rho)
    }

    /// Euclidean distance to the closed cone.
    pub fn distance(&self, y: &[f64]) -> Result<f64> {
        self.check(y)?;
        let (t, rho, _) = self.split(y);
        Ok(closed_cone_distance(t, rho))
    }

    /// Distance from an interior point to the boundary; 0 outside.
    pub fn depth(&self, y: &[f64]) -> Result<f64> {
        self.check(y)?;
        let (t, rho, _) = self.split(y);
        if t <= rho {
            return Ok(0.0);
        }
        Ok(if self.dim() == 1 {
            t
        } else {
            (t - rho) / std::f64::consts::SQRT_2
        })
    }

    /// Depth inside, minus the distance outside.
    pub fn signed_depth(&self, y: &[f64]) -> Result<f64> {
        let d = self.depth(y)?;
        if d > 0.0 {
            Ok(d)
        } else {
            Ok(-self.distance(y)?)
        }
    }

    /// Nearest point of the closed cone.
    pub fn project(&self, y: &[f64]) -> Result<Vec<f64>> {
        self.check(y)?;
        let (t, rho, transverse) = self.split(y);
        let (pt, scale) = if t >= rho {
            (t, 1.0)
        } else if t <= -rho {
            (0.0, 0.0)
        } else {
            let alpha = 0.5 * (t + rho);
            (alpha, alpha / rho)
        };
        let sign = if self.negated { -1.0 } else { 1.0 };
        Ok(self
            .axis
            .iter()
            .zip(&transverse)
            .map(|(a, v)| sign * ((pt + self.shift) * a + scale * v))
            .collect())
    }
}

fn closed_cone_distance(t: f64, rho: f64) -> f64 {
    if t >= rho {
        0.0
    } else if t <= -rho {
        (t * t + rho * rho).sqrt()
    } else {
        (rho - t) / std::f64::consts::SQRT_2
    }
}

pub fn dist_to_cone(x: &[f64], cone: &Cone) -> Result<f64> {
    cone.distance(x)
}

/// Distance to the closed double light cone `V = V̄₊ ∪ (−V̄₊)` (time axis first).
pub fn dist_to_light_cone(x: &[f64]) -> f64 {
    let rho = norm(&x[1..]);
    let t = x[0].abs();
    if t >= rho {
        0.0
    } else {
        (rho - t) / std::f64::consts::SQRT_2
    }
}

/// Nearest point of the closed double light cone.
pub fn project_light_cone(x: &[f64]) -> Vec<f64> {
    let rho = norm(&x[1..]);
    let t = x[0].abs();
    if t >= rho {
        return x.to_vec();
    }
    let alpha = 0.5 * (t + rho);
    let mut out = Vec::with_capacity(x.len());
    out.push(alpha * x[0].signum());
    out.extend(x[1..].iter().map(|v| alpha * v / rho));
    if x[0] == 0.0 {
        out[0] = alpha;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn distances_in_four_dimensions() {
        let v = Cone::forward(4).unwrap();
        assert_eq!(v.distance(&[1.0, 0.0, 0.0, 0.0]).unwrap(), 0.0);
        assert_abs_diff_eq!(v.distance(&[-1.0, 0.0, 0.0, 0.0]).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            v.distance(&[0.0, 1.0, 0.0, 0.0]).unwrap(),
            std::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-15
        );
        assert!(v.distance(&[0.0, 1.0]).is_err());
    }

    #[test]
    fn negation_and_shift() {
        let g = Cone::forward(2).unwrap().with_shift(1.0).unwrap();
        assert!(g.contains(&[2.0, 0.5]).unwrap());
        assert!(!g.contains(&[1.2, 0.5]).unwrap());
        assert!(g.negated().contains(&[-2.0, -0.5]).unwrap());
        assert_eq!(g.negated().apex(), vec![-1.0, 0.0]);
        let p = g.project(&[0.0, 3.0]).unwrap();
        assert!(g.distance(&p).unwrap() < 1e-14);
    }

    #[test]
    fn one_dimensional_cone_is_a_half_line() {
        let g = Cone::forward(1).unwrap().with_shift(0.5).unwrap();
        assert_abs_diff_eq!(g.depth(&[2.0]).unwrap(), 1.5, epsilon = 1e-15);
        assert_abs_diff_eq!(g.distance(&[-1.0]).unwrap(), 1.5, epsilon = 1e-15);
    }

    #[test]
    fn double_cone_projection() {
        let x = [-0.5, 2.0, 0.0, 0.0];
        let p = project_light_cone(&x);
        assert_abs_diff_eq!(dist_to_light_cone(&p), 0.0, epsilon = 1e-14);
        let d: f64 = x.iter().zip(&p).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        assert_abs_diff_eq!(d, dist_to_light_cone(&x), epsilon = 1e-14);
        assert!(p[0] < 0.0);
    }
}

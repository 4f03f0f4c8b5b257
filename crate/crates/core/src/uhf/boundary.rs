use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::complex::C64;
use crate::error::{Error, Result};
use crate::geometry::Cone;

pub type Evaluator = Arc<dyn Fn(&[C64]) -> Result<C64> + Send + Sync>;

/// Which tube the function lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `T(Γ)`.
    Upper,
    /// `T(−Γ)`.
    Lower,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundaryFamily {
    /// `Σ a_k z₁^k`.
    Polynomial {
        coeffs: Vec<C64>,
    },
    Rational {
        poles: Vec<C64>,
    },
    /// `(2πi)^{−1} Σ c_k / (w_k − z)`.
    CauchyHilbert {
        masses: Vec<(C64, C64)>,
    },
    Custom {
        label: String,
    },
}

/// `sup_{T(K)} |F(z)| (1 + |z|)^{−j} ≤ M` checked on sampled sub-tubes
/// `K ⊂ Γ` at depth at least `inset`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthCertificate {
    pub order: u32,
    pub constant: f64,
    pub inset: f64,
    pub samples: usize,
}

/// Holomorphic function on a tube with a polynomial-growth certificate.
#[derive(Clone)]
pub struct BoundaryFunction {
    eval: Evaluator,
    side: Side,
    cone: Cone,
    certificate: GrowthCertificate,
    family: BoundaryFamily,
    singularities: Vec<C64>,
}

impl fmt::Debug for BoundaryFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundaryFunction")
            .field("side", &self.side)
            .field("cone", &self.cone)
            .field("certificate", &self.certificate)
            .field("family", &self.family)
            .finish()
    }
}

impl BoundaryFunction {
    /// Wraps `eval` on `T(Γ)` (upper) or `T(−Γ)` (lower), where `cone` is Γ,
    /// and certifies growth order `order` on sampled sub-tubes.
    ///
    /// `singularities` lists known singular points (n = 1); any of them
    /// inside the tube is rejected.
    pub fn new(
        eval: Evaluator,
        side: Side,
        cone: Cone,
        order: u32,
        family: BoundaryFamily,
        singularities: Vec<C64>,
    ) -> Result<Self> {
        let tube = match side {
            Side::Upper => cone.clone(),
            Side::Lower => cone.negated(),
        };
        for s in &singularities {
            if cone.dim() == 1 && tube.contains(&[s.im])? {
                return Err(Error::invalid(format!("singular point {s} lies inside the tube")));
            }
        }
        let mut f = BoundaryFunction {
            eval,
            side,
            cone,
            certificate: GrowthCertificate {
                order,
                constant: 0.0,
                inset: 0.05,
                samples: 0,
            },
            family,
            singularities,
        };
        let (sup, count) = f.sampled_growth(order, 0.05)?;
        f.certificate = GrowthCertificate {
            order,
            constant: 1.5 * sup + 1e-300,
            inset: 0.05,
            samples: count,
        };
        Ok(f)
    }

    /// `Σ a_k z^k` on both tubes of the one-dimensional cone `{y > ℓ}`.
    pub fn polynomial(coeffs: Vec<C64>, side: Side, ell: f64) -> Result<Self> {
        let cs = coeffs.clone();
        let eval: Evaluator =
            Arc::new(move |z: &[C64]| Ok(cs.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * z[0] + c)));
        let degree = coeffs.len().saturating_sub(1) as u32;
        let cone = Cone::forward(1)?.with_shift(ell)?;
        Self::new(eval, side, cone, degree, BoundaryFamily::Polynomial { coeffs }, vec![])
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    /// The tube's base: Γ for the upper side, −Γ for the lower.
    pub fn tube_cone(&self) -> Cone {
        match self.side {
            Side::Upper => self.cone.clone(),
            Side::Lower => self.cone.negated(),
        }
    }

    pub fn dim(&self) -> usize {
        self.cone.dim()
    }

    pub fn ell(&self) -> f64 {
        self.cone.shift()
    }

    pub fn certificate(&self) -> GrowthCertificate {
        self.certificate
    }

    pub fn family(&self) -> &BoundaryFamily {
        &self.family
    }

    pub fn singularities(&self) -> &[C64] {
        &self.singularities
    }

    /// Distance from `z` (n = 1) to the nearest listed singular point.
    pub fn singular_distance(&self, z: C64) -> f64 {
        self.singularities
            .iter()
            .map(|s| (s - z).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Raw evaluation, without a tube-membership check.
    pub fn eval_raw(&self, z: &[C64]) -> Result<C64> {
        if z.len() != self.dim() {
            return Err(Error::invalid("boundary function: dimension mismatch"));
        }
        (self.eval)(z)
    }

    /// Evaluation restricted to the open tube.
    pub fn eval(&self, z: &[C64]) -> Result<C64> {
        let im: Vec<f64> = z.iter().map(|c| c.im).collect();
        if !self.tube_cone().contains(&im)? {
            return Err(Error::domain(format!(
                "{z:?} is outside the tube of the boundary function"
            )));
        }
        self.eval_raw(z)
    }

    /// Largest sampled `|F(z)|(1 + |z|)^{−j}` on sub-tubes of depth ≥ `inset`.
    fn sampled_growth(&self, order: u32, inset: f64) -> Result<(f64, usize)> {
        let n = self.dim();
        let tube = self.tube_cone();
        let apex = tube.apex();
        let sign = if self.side == Side::Upper { 1.0 } else { -1.0 };
        let mut sup: f64 = 0.0;
        let mut count = 0;
        let depths = [inset, 0.25, 1.0, 3.0];
        let reals = [-50.0, -10.0, -3.0, -1.0, -0.3, 0.0, 0.3, 1.0, 3.0, 10.0, 50.0];
        for &d in &depths {
            // Depth d along the axis of a cone with opening angle 45° needs an
            // axial offset of √2·d (n ≥ 2) or d (n = 1).
            let axial = if n == 1 { d } else { std::f64::consts::SQRT_2 * d };
            let im: Vec<f64> = apex
                .iter()
                .zip(self.cone.axis())
                .map(|(a, e)| a + sign * axial * e)
                .collect();
            for &x in &reals {
                let z: Vec<C64> = im.iter().map(|y| C64::new(x, *y)).collect();
                let v = self.eval_raw(&z)?;
                if !v.is_finite() {
                    return Err(Error::Evaluation(format!("boundary function not finite at {z:?}")));
                }
                let modulus = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                sup = sup.max(v.norm() * (1.0 + modulus).powi(-(order as i32)));
                count += 1;
            }
        }
        Ok((sup, count))
    }

    /// Re-checks the stored certificate on the sample grid.
    pub fn validate_certificate(&self) -> Result<bool> {
        let (sup, _) = self.sampled_growth(self.certificate.order, self.certificate.inset)?;
        Ok(sup <= self.certificate.constant)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_certificate_and_domain() {
        let f = BoundaryFunction::polynomial(
            vec![
                C64::new(0.0, 0.0),
                C64::new(2.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
            ],
            Side::Upper,
            0.5,
        )
        .unwrap();
        assert_eq!(f.certificate().order, 3);
        assert!(f.validate_certificate().unwrap());
        assert!(f.eval(&[C64::new(1.0, 1.0)]).is_ok());
        assert!(f.eval(&[C64::new(1.0, 0.2)]).unwrap_err().is_domain());
        let v = f.eval(&[C64::new(1.0, 1.0)]).unwrap();
        let z = C64::new(1.0, 1.0);
        assert!((v - (z * z * z + 2.0 * z)).norm() < 1e-14);
    }

    #[test]
    fn singular_point_inside_tube_is_rejected() {
        let eval: Evaluator = Arc::new(|z: &[C64]| Ok(1.0 / (z[0] - C64::new(0.0, 2.0))));
        let cone = Cone::forward(1).unwrap().with_shift(0.5).unwrap();
        let r = BoundaryFunction::new(
            eval,
            Side::Upper,
            cone,
            0,
            BoundaryFamily::Rational {
                poles: vec![C64::new(0.0, 2.0)],
            },
            vec![C64::new(0.0, 2.0)],
        );
        assert!(r.is_err());
    }
}

use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use super::boundary::{BoundaryFamily, BoundaryFunction, Evaluator, Side};
use super::functional::Ultrahyperfunction;
use super::test_function::TestFunction;
use crate::complex::{C64, I};
use crate::error::{Error, Result};
use crate::geometry::Cone;
use crate::quadrature::{polyline_integral, GaussLegendre, Segment};

/// Points closer than this to a mass are treated as hitting the pole.
const POLE_RADIUS: f64 = 1e-12;

/// `F(z) = (2πi)^{−1} Σ c_k / (w_k − z)`.
pub fn cauchy_hilbert_value(masses: &[(C64, C64)], z: C64) -> Result<C64> {
    let mut sum = C64::new(0.0, 0.0);
    for (c, w) in masses {
        let d = w - z;
        if d.norm() < POLE_RADIUS {
            return Err(Error::Pole(format!("z = {z} coincides with the mass at {w}")));
        }
        sum += c / d;
    }
    Ok(sum / (2.0 * PI * I))
}

/// Restrictions of the Cauchy–Hilbert transform of `Σ c_k δ_{w_k}` to
/// `Im z > ℓ` and `Im z < −ℓ`, each with a growth-order-0 certificate.
pub fn cauchy_hilbert(masses: &[(C64, C64)], ell: f64) -> Result<(BoundaryFunction, BoundaryFunction)> {
    if masses.is_empty() {
        return Err(Error::invalid("Cauchy-Hilbert transform of an empty point-mass list"));
    }
    if let Some((_, w)) = masses.iter().find(|(_, w)| !(w.im.abs() < ell)) {
        return Err(Error::invalid(format!(
            "mass at {w} is not inside the strip |Im w| < {ell}"
        )));
    }
    let cone = Cone::forward(1)?.with_shift(ell)?;
    let poles: Vec<C64> = masses.iter().map(|(_, w)| *w).collect();
    let build = |side| {
        let m = masses.to_vec();
        let eval: Evaluator = Arc::new(move |z: &[C64]| cauchy_hilbert_value(&m, z[0]));
        BoundaryFunction::new(
            eval,
            side,
            cone.clone(),
            0,
            BoundaryFamily::CauchyHilbert {
                masses: masses.to_vec(),
            },
            poles.clone(),
        )
    };
    Ok((build(Side::Upper)?, build(Side::Lower)?))
}

/// `φ ↦ ∫_{Im z = η} F₊φ − ∫_{Im z = −η} F₋φ` (both left to right), the
/// functional whose value equals `Σ c_k φ(w_k)`.
pub fn cauchy_hilbert_functional(masses: &[(C64, C64)], ell: f64) -> Result<Ultrahyperfunction> {
    let (upper, lower) = cauchy_hilbert(masses, ell)?;
    Ultrahyperfunction::combination(vec![
        (C64::new(1.0, 0.0), Ultrahyperfunction::boundary(upper, None)?),
        (C64::new(-1.0, 0.0), Ultrahyperfunction::boundary(lower, None)?),
    ])
}

/// Axis-aligned rectangle `[x0, x1] + i[y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rectangle {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rectangle {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        if !(x0 < x1 && y0 < y1) {
            return Err(Error::invalid("rectangle corners must be ordered"));
        }
        Ok(Rectangle { x0, x1, y0, y1 })
    }

    /// Bounding box of the points, padded by `pad` on every side.
    pub fn around(points: &[C64], pad: f64) -> Result<Self> {
        let mut r = Rectangle {
            x0: f64::INFINITY,
            x1: -f64::INFINITY,
            y0: f64::INFINITY,
            y1: -f64::INFINITY,
        };
        for p in points {
            r.x0 = r.x0.min(p.re - pad);
            r.x1 = r.x1.max(p.re + pad);
            r.y0 = r.y0.min(p.im - pad);
            r.y1 = r.y1.max(p.im + pad);
        }
        Self::new(r.x0, r.x1, r.y0, r.y1)
    }

    pub fn contains(&self, z: C64) -> bool {
        self.x0 < z.re && z.re < self.x1 && self.y0 < z.im && z.im < self.y1
    }

    /// Counter-clockwise boundary.
    pub fn boundary(&self) -> Vec<Segment> {
        let c = [
            C64::new(self.x0, self.y0),
            C64::new(self.x1, self.y0),
            C64::new(self.x1, self.y1),
            C64::new(self.x0, self.y1),
        ];
        (0..4).map(|k| Segment::new(c[k], c[(k + 1) % 4])).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RoundTrip {
    pub rectangle: Rectangle,
    /// `−∮_C F φ dz` with `C` counter-clockwise.
    pub contour_value: C64,
    /// `Σ c_k φ(w_k)`.
    pub direct_value: C64,
    pub difference: f64,
}

/// Recovers `f(φ)` from its Cauchy–Hilbert transform by a closed contour
/// integral; the rectangle defaults to the masses' bounding box padded by 0.25.
pub fn cauchy_round_trip(masses: &[(C64, C64)], phi: &TestFunction, rectangle: Option<Rectangle>) -> Result<RoundTrip> {
    if phi.dim() != 1 {
        return Err(Error::invalid("the round trip is one-dimensional"));
    }
    let points: Vec<C64> = masses.iter().map(|(_, w)| *w).collect();
    let rect = match rectangle {
        Some(r) => r,
        None => Rectangle::around(&points, 0.25)?,
    };
    if let Some(w) = points.iter().find(|w| !rect.contains(**w)) {
        return Err(Error::invalid(format!(
            "the rectangle does not encircle the mass at {w}"
        )));
    }
    let rule = GaussLegendre::new(12);
    let mut failure = None;
    let integral = polyline_integral(&rect.boundary(), 0.02, &rule, |z| {
        match cauchy_hilbert_value(masses, z) {
            Ok(f) => f * phi.eval(&[z]),
            Err(e) => {
                failure.get_or_insert(e);
                C64::new(0.0, 0.0)
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let direct: C64 = masses.iter().map(|(c, w)| c * phi.eval(&[*w])).sum();
    Ok(RoundTrip {
        rectangle: rect,
        contour_value: -integral,
        direct_value: direct,
        difference: (-integral - direct).norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn single_mass_value() {
        let w = C64::new(0.0, 0.2);
        let v = cauchy_hilbert_value(&[(C64::new(1.0, 0.0), w)], C64::new(1.0, 0.0)).unwrap();
        let expected = 1.0 / (2.0 * PI * I) / (w - 1.0);
        assert_abs_diff_eq!((v - expected).norm(), 0.0, epsilon = 1e-15);
        assert!(matches!(
            cauchy_hilbert_value(&[(C64::new(1.0, 0.0), w)], w),
            Err(Error::Pole(_))
        ));
    }

    #[test]
    fn round_trip_on_the_small_rectangle() {
        let phi = TestFunction::gaussian_1d(0.0, 1.0).unwrap();
        let rect = Rectangle::new(-0.1, 0.1, -0.5, 0.5).unwrap();
        let rt = cauchy_round_trip(&[(C64::new(1.0, 0.0), C64::new(0.0, 0.2))], &phi, Some(rect)).unwrap();
        assert_abs_diff_eq!(
            (rt.direct_value - C64::new(0.04f64.exp(), 0.0)).norm(),
            0.0,
            epsilon = 1e-14
        );
        assert!(rt.difference < 1e-8, "{}", rt.difference);
    }

    #[test]
    fn tubes_and_certificates() {
        let (up, low) = cauchy_hilbert(&[(C64::new(1.0, 0.0), C64::new(0.0, 0.2))], 0.5).unwrap();
        assert_eq!(up.certificate().order, 0);
        assert!(up.eval(&[C64::new(0.0, 1.0)]).is_ok());
        assert!(low.eval(&[C64::new(0.0, 1.0)]).unwrap_err().is_domain());
        assert!(cauchy_hilbert(&[(C64::new(1.0, 0.0), C64::new(0.0, 0.7))], 0.5).is_err());
    }
}

//! Complex scalar helpers: the `C64` alias, points of ℂⁿ and the
//! hyperbolic reciprocals used by the one-dimensional kernel.

use num_complex::Complex64;

pub type C64 = Complex64;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

/// A point of ℂⁿ stored as separate real and imaginary parts.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ComplexPoint {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl ComplexPoint {
    pub fn new(re: Vec<f64>, im: Vec<f64>) -> Self {
        assert_eq!(re.len(), im.len(), "real and imaginary parts differ in length");
        ComplexPoint { re, im }
    }

    pub fn from_coords(z: &[C64]) -> Self {
        ComplexPoint {
            re: z.iter().map(|c| c.re).collect(),
            im: z.iter().map(|c| c.im).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.re.len()
    }

    pub fn coords(&self) -> Vec<C64> {
        self.re.iter().zip(&self.im).map(|(&a, &b)| C64::new(a, b)).collect()
    }
}

/// A rectangular sample grid in ℂ (one complex variable).
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexGrid {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl ComplexGrid {
    /// Inclusive ranges `lo..=hi` with the given step on both axes.
    pub fn from_ranges(re: (f64, f64, f64), im: (f64, f64, f64)) -> Self {
        ComplexGrid {
            re: inclusive_range(re.0, re.1, re.2),
            im: inclusive_range(im.0, im.1, im.2),
        }
    }

    /// Points in row-major order (imaginary part outer, real part inner).
    pub fn points(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.re.len() * self.im.len());
        for &y in &self.im {
            for &x in &self.re {
                out.push(C64::new(x, y));
            }
        }
        out
    }
}

/// `lo, lo+step, …` up to and including `hi` (within a small slack).
pub fn inclusive_range(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    if step <= 0.0 || hi < lo {
        return vec![lo];
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=count).map(|k| lo + k as f64 * step).collect()
}

/// Hyperbolic secant, evaluated without overflow for large |Re w|.
pub fn sech(w: C64) -> C64 {
    // sech w = 2e^{-w}/(1+e^{-2w}); flip the sign of w so the exponential decays.
    let s = if w.re >= 0.0 { -w } else { w };
    let e = s.exp();
    2.0 * e / (1.0 + e * e)
}

/// Hyperbolic cosecant, evaluated without overflow for large |Re w|.
pub fn cosech(w: C64) -> C64 {
    if w.re >= 0.0 {
        let e = (-w).exp();
        2.0 * e / (1.0 - e * e)
    } else {
        let e = w.exp();
        -2.0 * e / (1.0 - e * e)
    }
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Euclidean norm of the imaginary part of a point of ℂⁿ.
pub fn im_norm(z: &[C64]) -> f64 {
    z.iter().map(|c| c.im * c.im).sum::<f64>().sqrt()
}

pub fn re_norm(z: &[C64]) -> f64 {
    z.iter().map(|c| c.re * c.re).sum::<f64>().sqrt()
}

/// Parses `1.5`, `-2i`, `0.3i`, `1-2i`, `0+0.5i`.
pub fn parse_complex(s: &str) -> Option<C64> {
    let s = s.trim().replace(' ', "");
    if s.is_empty() {
        return None;
    }
    if let Some(body) = s.strip_suffix('i') {
        // Split at the last sign that is not part of an exponent or leading.
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            let c = bytes[k] as char;
            if (c == '+' || c == '-') && !matches!(bytes[k - 1] as char, 'e' | 'E') {
                split = Some(k);
                break;
            }
        }
        let (re, im) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => other.parse().ok()?,
        };
        Some(C64::new(re.parse().ok()?, im))
    } else {
        Some(C64::new(s.parse().ok()?, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn sech_matches_naive_formula_in_the_safe_range() {
        for &(a, b) in &[(0.3, 0.1), (-1.2, 0.7), (2.0, -1.3), (0.0, 0.4)] {
            let w = C64::new(a, b);
            let naive = 1.0 / w.cosh();
            assert_abs_diff_eq!((sech(w) - naive).norm(), 0.0, epsilon = 1e-14);
            let naive = 1.0 / w.sinh();
            assert_abs_diff_eq!((cosech(w) - naive).norm(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn sech_does_not_overflow() {
        let v = sech(C64::new(800.0, 0.3));
        assert!(v.is_finite() && v.norm() < 1e-300);
        let v = cosech(C64::new(-800.0, 0.3));
        assert!(v.is_finite());
    }

    #[test]
    fn parses_complex_literals() {
        assert_eq!(parse_complex("0+0.5i"), Some(C64::new(0.0, 0.5)));
        assert_eq!(parse_complex("0.3i"), Some(C64::new(0.0, 0.3)));
        assert_eq!(parse_complex("-1-2i"), Some(C64::new(-1.0, -2.0)));
        assert_eq!(parse_complex("2.5"), Some(C64::new(2.5, 0.0)));
        assert_eq!(parse_complex("1e-3+2e-1i"), Some(C64::new(1e-3, 0.2)));
        assert_eq!(parse_complex("-i"), Some(C64::new(0.0, -1.0)));
        assert_eq!(parse_complex("x"), None);
    }

    #[test]
    fn inclusive_range_hits_endpoint() {
        let r = inclusive_range(-0.9, 0.9, 0.3);
        assert_eq!(r.len(), 7);
        assert_abs_diff_eq!(*r.last().unwrap(), 0.9, epsilon = 1e-12);
    }
}

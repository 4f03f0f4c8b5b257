use std::f64::consts::PI;

use serde::Serialize;

use crate::complex::C64;
use crate::error::{Error, Result};
use crate::kernels::kernel_meromorphic_1d;
use crate::quadrature::{line_integral, ContourSpec};
use crate::uhf::{BoundaryFunction, Side, Ultrahyperfunction};

/// Fraction of `r` kept between a kernel argument and the kernel's poles.
pub const DEFAULT_KERNEL_MARGIN: f64 = 0.05;

/// A value together with its quadrature error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: C64,
    pub error_estimate: f64,
}

impl Estimate {
    pub fn exact(value: C64) -> Self {
        Estimate {
            value,
            error_estimate: 0.0,
        }
    }
}

/// Where a regularization may be evaluated.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainTag {
    /// `Im z ≥ min_im` (nominally `Im z > ℓ − r`).
    V1 {
        min_im: f64,
        nominal_min_im: f64,
    },
    /// `Im z ≤ max_im` (nominally `Im z < r − ℓ`).
    V2 {
        max_im: f64,
        nominal_max_im: f64,
    },
    /// `Re z ∉ [a, b]`, or `|Im z| ≤ strip` where every kernel translate is
    /// holomorphic across the carrier `[a, b] + i[−ℓ, ℓ]`.
    Z {
        a: f64,
        b: f64,
        ell: f64,
        strip: f64,
    },
    Intersection {
        parts: Vec<DomainTag>,
    },
}

impl DomainTag {
    pub fn contains(&self, z: C64) -> bool {
        match self {
            DomainTag::V1 { min_im, .. } => z.im >= *min_im,
            DomainTag::V2 { max_im, .. } => z.im <= *max_im,
            DomainTag::Z { a, b, strip, .. } => z.re < *a || z.re > *b || z.im.abs() <= *strip,
            DomainTag::Intersection { parts } => parts.iter().all(|p| p.contains(z)),
        }
    }

    pub fn label(&self) -> String {
        match self {
            DomainTag::V1 { min_im, .. } => format!("V1(Im z >= {min_im:.4})"),
            DomainTag::V2 { max_im, .. } => format!("V2(Im z <= {max_im:.4})"),
            DomainTag::Z { a, b, strip, .. } => format!("Z(Re z not in [{a}, {b}] or |Im z| <= {strip:.4})"),
            DomainTag::Intersection { parts } => parts.iter().map(|p| p.label()).collect::<Vec<_>>().join(" & "),
        }
    }
}

/// Options for [`regularize`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularizeOptions {
    /// Contour height `|η|` for boundary variants; default `ℓ + 0.1r`.
    pub eta: Option<f64>,
    /// Kernel arguments keep `|Im| ≤ (1 − margin)·r`.
    pub kernel_margin: f64,
    /// Carrier box `(a, b, ℓ)` for point masses; default is their bounding box.
    pub carrier: Option<(f64, f64, f64)>,
}

impl Default for RegularizeOptions {
    fn default() -> Self {
        RegularizeOptions {
            eta: None,
            kernel_margin: DEFAULT_KERNEL_MARGIN,
            carrier: None,
        }
    }
}

#[derive(Debug, Clone)]
enum Part {
    /// `∫ F(ξ + iη') K_r(z − ξ − iη') dξ`, `η'` the signed contour height.
    Boundary {
        f: BoundaryFunction,
        eta: f64,
    },
    PointMasses {
        masses: Vec<(C64, C64)>,
    },
    Combination {
        terms: Vec<(C64, RegularizedFunction)>,
    },
}

/// `U = u ∗ K_r` for a one-variable ultrahyperfunction `u`.
#[derive(Debug, Clone)]
pub struct RegularizedFunction {
    r: f64,
    margin: f64,
    part: Part,
    domain: DomainTag,
}

/// Regularizes `u` with the scaled kernel `K_r` (one variable).
///
/// Boundary variants integrate along `Im ξ = ±max(η, |Im z|)`, so the kernel
/// argument never comes closer than `margin·r` to a pole; point masses use
/// `Σ c_k K_r(z − w_k)` exactly.
pub fn regularize(u: &Ultrahyperfunction, r: f64, opts: &RegularizeOptions) -> Result<RegularizedFunction> {
    if u.dim() != 1 {
        return Err(Error::invalid("the continuation pipeline works in one variable"));
    }
    if !(r > 0.0) || !(opts.kernel_margin > 0.0 && opts.kernel_margin < 1.0) {
        return Err(Error::invalid("need r > 0 and a kernel margin in (0, 1)"));
    }
    let reach = (1.0 - opts.kernel_margin) * r;
    match u {
        Ultrahyperfunction::Boundary { f, .. } => {
            let ell = f.ell();
            if !(r > ell) {
                return Err(Error::invalid(format!("r = {r} must exceed ℓ = {ell}")));
            }
            let eta = opts.eta.unwrap_or(ell + 0.1 * r);
            if !(eta > ell) {
                return Err(Error::invalid(format!("contour height {eta} must exceed ℓ = {ell}")));
            }
            let (eta, domain) = match f.side() {
                Side::Upper => (
                    eta,
                    DomainTag::V1 {
                        min_im: eta - reach,
                        nominal_min_im: ell - r,
                    },
                ),
                Side::Lower => (
                    -eta,
                    DomainTag::V2 {
                        max_im: -eta + reach,
                        nominal_max_im: r - ell,
                    },
                ),
            };
            Ok(RegularizedFunction {
                r,
                margin: opts.kernel_margin,
                part: Part::Boundary { f: f.clone(), eta },
                domain,
            })
        }
        Ultrahyperfunction::PointMasses { masses, .. } => {
            let masses: Vec<(C64, C64)> = masses.iter().map(|(c, w)| (*c, w[0])).collect();
            let (a, b, ell) = match opts.carrier {
                Some(box_) => box_,
                None => bounding_box(&masses),
            };
            if let Some((_, w)) = masses.iter().find(|(_, w)| w.re < a || w.re > b || w.im.abs() > ell) {
                return Err(Error::invalid(format!("mass at {w} lies outside the carrier box")));
            }
            if !(ell < r) {
                return Err(Error::invalid(format!(
                    "carrier half-height {ell} is not inside |Im w| < r = {r}"
                )));
            }
            let domain = DomainTag::Z {
                a,
                b,
                ell,
                strip: (reach - ell).max(0.0),
            };
            Ok(RegularizedFunction {
                r,
                margin: opts.kernel_margin,
                part: Part::PointMasses { masses },
                domain,
            })
        }
        Ultrahyperfunction::Combination { terms } => {
            let mut parts = Vec::with_capacity(terms.len());
            let mut tags = Vec::new();
            for (a, v) in terms {
                let reg = regularize(v, r, opts)?;
                tags.push(reg.domain.clone());
                parts.push((*a, reg));
            }
            Ok(RegularizedFunction {
                r,
                margin: opts.kernel_margin,
                part: Part::Combination { terms: parts },
                domain: DomainTag::Intersection { parts: tags },
            })
        }
    }
}

fn bounding_box(masses: &[(C64, C64)]) -> (f64, f64, f64) {
    let a = masses.iter().map(|(_, w)| w.re).fold(f64::INFINITY, f64::min);
    let b = masses.iter().map(|(_, w)| w.re).fold(f64::NEG_INFINITY, f64::max);
    let ell = masses.iter().map(|(_, w)| w.im.abs()).fold(0.0, f64::max);
    if masses.is_empty() {
        (0.0, 0.0, 0.0)
    } else {
        (a, b, ell)
    }
}

impl RegularizedFunction {
    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn domain(&self) -> &DomainTag {
        &self.domain
    }

    pub fn contains(&self, z: C64) -> bool {
        self.domain.contains(z)
    }

    /// `self + a·other` on the intersection of both domains.
    pub fn plus(&self, a: C64, other: &RegularizedFunction) -> Result<RegularizedFunction> {
        if self.r != other.r {
            return Err(Error::invalid("combined regularizations must share r"));
        }
        Ok(RegularizedFunction {
            r: self.r,
            margin: self.margin,
            part: Part::Combination {
                terms: vec![(C64::new(1.0, 0.0), self.clone()), (a, other.clone())],
            },
            domain: DomainTag::Intersection {
                parts: vec![self.domain.clone(), other.domain.clone()],
            },
        })
    }

    /// Evaluates `U(z)`; points outside the tagged domain raise a domain error.
    pub fn eval(&self, z: C64) -> Result<Estimate> {
        if !self.domain.contains(z) {
            return Err(Error::domain(format!(
                "U({z}) requested outside {}",
                self.domain.label()
            )));
        }
        self.eval_unchecked(z)
    }

    fn eval_unchecked(&self, z: C64) -> Result<Estimate> {
        match &self.part {
            Part::PointMasses { masses } => {
                let mut value = C64::new(0.0, 0.0);
                let mut scale = 0.0;
                for (c, w) in masses {
                    let term = c * kernel_meromorphic_1d(z - w, self.r)?;
                    value += term;
                    scale += term.norm();
                }
                Ok(Estimate {
                    value,
                    error_estimate: 4.0 * f64::EPSILON * scale,
                })
            }
            Part::Combination { terms } => {
                let mut value = C64::new(0.0, 0.0);
                let mut err = 0.0;
                for (a, u) in terms {
                    let e = u.eval_unchecked(z)?;
                    value += a * e.value;
                    err += a.norm() * e.error_estimate;
                }
                Ok(Estimate {
                    value,
                    error_estimate: err,
                })
            }
            Part::Boundary { f, eta } => self.boundary_integral(f, *eta, z),
        }
    }

    fn boundary_integral(&self, f: &BoundaryFunction, eta: f64, z: C64) -> Result<Estimate> {
        let r = self.r;
        // Move the contour up to Im z (or down, for the lower tube) when z
        // lies beyond the default height.
        let height = if eta > 0.0 { eta.max(z.im) } else { eta.min(z.im) };
        let pole_gap = r - (z.im - height).abs();
        let singular_gap = f
            .singularities()
            .iter()
            .map(|s| (s.im - height).abs())
            .fold(f64::INFINITY, f64::min);
        let gap = pole_gap.min(singular_gap);
        if !(gap > 0.0) {
            return Err(Error::domain(format!("no admissible contour for U({z})")));
        }
        let step = (2.0 * PI * gap / 60.0).min(0.25);
        let cert = f.certificate();
        let order = cert.order as f64;
        let truncation = 2.0 * r / PI * (40.0 + order * (2.0 + z.norm() + 40.0 * r).ln());
        let spec = ContourSpec::fitted(vec![height], truncation, step)?
            .with_centers(vec![z.re])
            .with_tail_tolerance(1e-8 * cert.constant.max(1.0));
        let mut failure = None;
        let q = line_integral(
            |zeta| {
                let k = kernel_meromorphic_1d(z - zeta[0], r);
                match (f.eval_raw(zeta), k) {
                    (Ok(v), Ok(k)) => v * k,
                    (Err(e), _) | (_, Err(e)) => {
                        failure.get_or_insert(e);
                        C64::new(0.0, 0.0)
                    }
                }
            },
            &spec,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        let q = q?;
        Ok(Estimate {
            value: q.value,
            error_estimate: q.error_estimate(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn kernel_has_horizontal_mass_one_half() {
        // ∫K_r(x + ic)dx by direct quadrature, independent of the pipeline.
        for &(r, cc) in &[(1.0, 0.0), (1.0, 0.7), (2.0, -1.5)] {
            let spec = ContourSpec::fitted(vec![0.0], 80.0 * r, 0.01).unwrap();
            let m = line_integral(|x| kernel_meromorphic_1d(x[0] + C64::new(0.0, cc), r).unwrap(), &spec).unwrap();
            assert_abs_diff_eq!(m.value.re, 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn constant_and_linear_boundary_values() {
        let one = BoundaryFunction::polynomial(vec![c(1.0)], Side::Upper, 0.5).unwrap();
        let u = regularize(
            &Ultrahyperfunction::boundary(one, None).unwrap(),
            1.5,
            &RegularizeOptions::default(),
        )
        .unwrap();
        for z in [C64::new(0.0, 0.0), C64::new(3.0, 2.0), C64::new(-1.0, -0.5)] {
            let v = u.eval(z).unwrap();
            assert_abs_diff_eq!((v.value - c(0.5)).norm(), 0.0, epsilon = 1e-11);
        }
        let lin = BoundaryFunction::polynomial(vec![c(0.0), c(1.0)], Side::Lower, 0.5).unwrap();
        let u = regularize(
            &Ultrahyperfunction::boundary(lin, None).unwrap(),
            1.5,
            &RegularizeOptions::default(),
        )
        .unwrap();
        for z in [C64::new(0.0, 0.0), C64::new(3.0, -2.0), C64::new(-1.0, 0.5)] {
            let v = u.eval(z).unwrap();
            assert_abs_diff_eq!((v.value - z / 2.0).norm(), 0.0, epsilon = 1e-10);
        }
        assert!(u.eval(C64::new(0.0, 1.0)).unwrap_err().is_domain());
    }

    #[test]
    fn point_mass_regularization_is_a_kernel_translate() {
        let w = C64::new(0.05, 0.3);
        let u = Ultrahyperfunction::point_masses_1d(&[(c(2.0), w)]).unwrap();
        let reg = regularize(&u, 1.5, &RegularizeOptions::default()).unwrap();
        let z = C64::new(1.0, 0.4);
        let want = 2.0 * kernel_meromorphic_1d(z - w, 1.5).unwrap();
        assert_eq!(reg.eval(z).unwrap().value, want);
        // Re z inside [a, b] and outside the holomorphy strip.
        assert!(reg.eval(C64::new(0.05, 1.4)).unwrap_err().is_domain());
    }

    #[test]
    fn r_not_above_ell_is_rejected() {
        let one = BoundaryFunction::polynomial(vec![c(1.0)], Side::Upper, 0.5).unwrap();
        let u = Ultrahyperfunction::boundary(one, None).unwrap();
        assert!(matches!(
            regularize(&u, 0.5, &RegularizeOptions::default()),
            Err(Error::InvalidArgument(_))
        ));
    }
}

use std::f64::consts::PI;

use serde::Serialize;

use super::functional::{apply, ApplyOptions, Ultrahyperfunction};
use super::test_function::TestFunction;
use crate::complex::C64;
use crate::error::{Error, Result};
use crate::geometry::CarrierSet;
use crate::quadrature::LadderSpec;

/// Values at or below this are treated as exactly decayed.
pub const PROBE_FLOOR: f64 = 1e-290;

/// `E_ξ^t(z) = (4πt)^{−n/2} exp(−(ξ − z)²/4t)`.
pub fn heat_probe(xi: &[f64], t: f64) -> Result<TestFunction> {
    TestFunction::heat_probe(xi.to_vec(), t)
}

/// Default probe ladder: `t = 0.5·2^{−k}`, 12 rungs.
pub fn default_probe_ladder() -> LadderSpec {
    LadderSpec::geometric(0.5, 0.5, 12, 3).expect("default probe ladder is valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Decays,
    Grows,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeRung {
    pub t: f64,
    /// `|u(E_ξ^t)|`, or `None` when the evaluation overflowed or failed.
    pub magnitude: Option<f64>,
    pub error_estimate: Option<f64>,
    /// `sup_{w∈L} (1 + |w|)^j (4πt)^{−n/2} exp[((Im w)² − (ξ − Re w)²)/4t]`.
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CarrierProbe {
    pub xi: Vec<f64>,
    pub rungs: Vec<ProbeRung>,
    /// Successive ratios `|u(E^{t_{k+1}})| / |u(E^{t_k})|`.
    pub ratios: Vec<f64>,
    pub verdict: Verdict,
    /// `max_{w∈L} [(Im w)² − (ξ − Re w)²]`; negative predicts decay.
    pub exponent_max: f64,
    pub growth_order: u32,
    pub carrier_samples: usize,
}

impl CarrierProbe {
    /// Verdict implied by the sign of the carrier exponent.
    pub fn predicted(&self) -> Verdict {
        if self.exponent_max < 0.0 {
            Verdict::Decays
        } else if self.exponent_max > 0.0 {
            Verdict::Grows
        } else {
            Verdict::Inconclusive
        }
    }
}

/// Polynomial growth order `j` entering the carrier bound.
pub fn growth_order(u: &Ultrahyperfunction) -> u32 {
    match u {
        Ultrahyperfunction::Boundary { f, .. } => f.certificate().order,
        Ultrahyperfunction::PointMasses { .. } => 0,
        Ultrahyperfunction::Combination { terms } => terms.iter().map(|(_, v)| growth_order(v)).max().unwrap_or(0),
    }
}

/// `(Im w)² − (ξ − Re w)²`.
fn exponent(xi: &[f64], w: &[C64]) -> f64 {
    xi.iter()
        .zip(w)
        .map(|(x, c)| c.im * c.im - (x - c.re) * (x - c.re))
        .sum()
}

/// Exact for boxes and point clouds, sampled for the light cone.
fn carrier_points(carrier: &CarrierSet, xi: &[f64], seed: u64) -> Vec<Vec<C64>> {
    match carrier {
        CarrierSet::Box1d { a, b, ell } => {
            let x = xi[0].clamp(*a, *b);
            let mut pts = carrier.sample(256, 0.0, seed);
            pts.push(vec![C64::new(x, *ell)]);
            pts.push(vec![C64::new(x, -*ell)]);
            pts
        }
        CarrierSet::PointCloud { points } => points.clone(),
        CarrierSet::LightCone4d { ell, .. } => {
            let radius = crate::complex::norm(xi) + ell + 1.0;
            carrier.sample(4096, radius, seed)
        }
    }
}

/// Evaluates `|u(E_ξ^t)|` down a ladder of `t` and classifies the sequence.
///
/// The verdict is `Decays` when each of the last three ratios is at most
/// 0.1, `Grows` when each exceeds 1 or an evaluation overflows, and
/// `Inconclusive` otherwise.
pub fn carrier_probe(
    u: &Ultrahyperfunction,
    carrier: &CarrierSet,
    xi: &[f64],
    ladder: &LadderSpec,
    opts: &ApplyOptions,
) -> Result<CarrierProbe> {
    let n = xi.len();
    if n != u.dim() || n != carrier.dim() {
        return Err(Error::invalid("probe point, functional and carrier dimensions differ"));
    }
    let j = growth_order(u);
    let points = carrier_points(carrier, xi, 0x5eed);
    let exponent_max = points.iter().map(|w| exponent(xi, w)).fold(f64::NEG_INFINITY, f64::max);

    let mut rungs = Vec::with_capacity(ladder.ts().len());
    for &t in ladder.ts() {
        let probe = heat_probe(xi, t)?;
        let (magnitude, error_estimate) = match apply(u, &probe, opts) {
            Ok(a) if a.value.is_finite() => (Some(a.value.norm()), Some(a.error_estimate)),
            Ok(_) | Err(Error::Evaluation(_)) | Err(Error::Divergence(_)) => (None, None),
            Err(e) => return Err(e),
        };
        let bound = points
            .iter()
            .map(|w| {
                let modulus = w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                (1.0 + modulus).powi(j as i32)
                    * (4.0 * PI * t).powf(-(n as f64) / 2.0)
                    * (exponent(xi, w) / (4.0 * t)).exp()
            })
            .fold(0.0, f64::max);
        rungs.push(ProbeRung {
            t,
            magnitude,
            error_estimate,
            bound,
        });
    }

    let ratios: Vec<f64> = rungs
        .windows(2)
        .map(|p| match (p[0].magnitude, p[1].magnitude) {
            (Some(a), Some(b)) if a <= PROBE_FLOOR && b <= PROBE_FLOOR => 0.0,
            (Some(a), Some(b)) => b / a,
            _ => f64::INFINITY,
        })
        .collect();
    let tail = &ratios[ratios.len().saturating_sub(3)..];
    let overflowed = rungs.iter().any(|r| r.magnitude.is_none());
    let verdict = if overflowed || tail.iter().all(|&q| q > 1.0) {
        Verdict::Grows
    } else if tail.iter().all(|&q| q <= 0.1) {
        Verdict::Decays
    } else {
        Verdict::Inconclusive
    };
    Ok(CarrierProbe {
        xi: xi.to_vec(),
        rungs,
        ratios,
        verdict,
        exponent_max,
        growth_order: j,
        carrier_samples: points.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn delta(y: f64) -> Ultrahyperfunction {
        Ultrahyperfunction::point_masses_1d(&[(C64::new(1.0, 0.0), C64::new(0.0, y))]).unwrap()
    }

    #[test]
    fn point_mass_probe_follows_the_exponent_sign() {
        let carrier = CarrierSet::PointCloud {
            points: vec![vec![C64::new(0.0, 0.5)]],
        };
        let ladder = default_probe_ladder();
        let far = carrier_probe(&delta(0.5), &carrier, &[1.0], &ladder, &ApplyOptions::default()).unwrap();
        assert_eq!(far.verdict, Verdict::Decays);
        assert_eq!(far.predicted(), Verdict::Decays);
        let near = carrier_probe(&delta(0.5), &carrier, &[0.3], &ladder, &ApplyOptions::default()).unwrap();
        assert_eq!(near.verdict, Verdict::Grows);
        assert_eq!(near.predicted(), Verdict::Grows);
        for r in &far.rungs {
            assert!(r.magnitude.unwrap() <= r.bound * (1.0 + 1e-12));
        }
    }

    #[test]
    fn zero_functional_decays() {
        let carrier = CarrierSet::box1d(-0.1, 0.1, 0.5).unwrap();
        let p = carrier_probe(
            &Ultrahyperfunction::zero(1),
            &carrier,
            &[1.0],
            &default_probe_ladder(),
            &ApplyOptions::default(),
        )
        .unwrap();
        assert_eq!(p.verdict, Verdict::Decays);
        assert!(p.rungs.iter().all(|r| r.magnitude == Some(0.0)));
    }
}

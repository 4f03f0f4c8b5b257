use rayon::prelude::*;
use serde::Serialize;

use super::continued::{glue, reconstruct, ContinuedFunction};
use super::regularize::{regularize, RegularizeOptions, RegularizedFunction};
use crate::complex::C64;
use crate::error::{Error, Result};
use crate::geometry::CarrierSet;
use crate::quadrature::{ladder_limit, polyline_nodes, GaussLegendre, LadderSpec, Segment};
use crate::uhf::{apply, heat_probe, ApplyOptions, BoundaryFunction, Side, TestFunction, Ultrahyperfunction};

/// `r` compared with `ℓ` and with the light-cone threshold `ℓ/(√2 − 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadiusReport {
    pub r: f64,
    pub ell: f64,
    pub r_over_ell: f64,
    pub lightcone_threshold: f64,
    pub above_ell: bool,
    pub above_lightcone_threshold: bool,
}

impl RadiusReport {
    pub fn new(r: f64, ell: f64) -> Self {
        let lightcone_threshold = ell / (std::f64::consts::SQRT_2 - 1.0);
        RadiusReport {
            r,
            ell,
            r_over_ell: if ell > 0.0 { r / ell } else { f64::INFINITY },
            lightcone_threshold,
            above_ell: r > ell,
            above_lightcone_threshold: r > lightcone_threshold,
        }
    }
}

/// Global continuation: `u₁ = u₂` assumed, `H = Σ_ω U(z + irω)` with
/// `U = U₁` on `V₁` and `U₂` elsewhere.
#[derive(Debug, Clone)]
pub struct GlobalFlow {
    pub u1: Ultrahyperfunction,
    pub u2: Ultrahyperfunction,
    pub reg1: RegularizedFunction,
    pub reg2: RegularizedFunction,
    pub h: ContinuedFunction,
    pub radius: RadiusReport,
}

pub fn global_continue(
    f1: &BoundaryFunction,
    f2: &BoundaryFunction,
    r: f64,
    opts: &RegularizeOptions,
) -> Result<GlobalFlow> {
    check_sides(f1, f2)?;
    let u1 = Ultrahyperfunction::boundary(f1.clone(), None)?;
    let u2 = Ultrahyperfunction::boundary(f2.clone(), None)?;
    let reg1 = regularize(&u1, r, opts)?;
    let reg2 = regularize(&u2, r, opts)?;
    let h = reconstruct(glue(reg1.clone(), Some(reg2.clone()), ("U1", "U2"))?);
    let ell = f1.ell().max(f2.ell());
    Ok(GlobalFlow {
        u1,
        u2,
        reg1,
        reg2,
        h,
        radius: RadiusReport::new(r, ell),
    })
}

fn check_sides(f1: &BoundaryFunction, f2: &BoundaryFunction) -> Result<()> {
    if f1.dim() != 1 || f2.dim() != 1 {
        return Err(Error::invalid("the continuation pipeline works in one variable"));
    }
    if f1.side() != Side::Upper || f2.side() != Side::Lower {
        return Err(Error::invalid("F1 must live on the upper tube and F2 on the lower one"));
    }
    Ok(())
}

/// Local continuation across a carrier box `L = [a, b] + i[−ℓ, ℓ]` of
/// `u₁ − u₂ = Σ c_k δ_{w_k}`.
#[derive(Debug, Clone)]
pub struct LocalFlow {
    pub a: f64,
    pub b: f64,
    pub ell: f64,
    pub u1: Ultrahyperfunction,
    pub u2: Ultrahyperfunction,
    pub difference: Vec<(C64, C64)>,
    pub reg1: RegularizedFunction,
    pub reg2: RegularizedFunction,
    pub reg12: RegularizedFunction,
    /// `H₁`, from `U₁` on `V₁` and `U₂ + U₁₂` on `V₂ ∩ Z`.
    pub h1: ContinuedFunction,
    /// `H₂`, from `U₂` on `V₂` and `U₁ − U₁₂` on `V₁ ∩ Z`.
    pub h2: ContinuedFunction,
    pub radius: RadiusReport,
}

pub fn local_continue(
    f1: &BoundaryFunction,
    f2: &BoundaryFunction,
    carrier: &CarrierSet,
    difference: &[(C64, C64)],
    r: f64,
    opts: &RegularizeOptions,
) -> Result<LocalFlow> {
    check_sides(f1, f2)?;
    let CarrierSet::Box1d { a, b, ell } = *carrier else {
        return Err(Error::invalid("the local flow needs a one-dimensional carrier box"));
    };
    if !(ell < r) {
        return Err(Error::invalid(format!(
            "carrier [{a}, {b}] + i[-{ell}, {ell}] is not inside |Im w| < r = {r}"
        )));
    }
    let u1 = Ultrahyperfunction::boundary(f1.clone(), None)?;
    let u2 = Ultrahyperfunction::boundary(f2.clone(), None)?;
    let diff = if difference.is_empty() {
        Ultrahyperfunction::zero(1)
    } else {
        Ultrahyperfunction::point_masses_1d(difference)?
    };
    let carrier_opts = RegularizeOptions {
        carrier: Some((a, b, ell)),
        ..opts.clone()
    };
    let reg1 = regularize(&u1, r, opts)?;
    let reg2 = regularize(&u2, r, opts)?;
    let reg12 = regularize(&diff, r, &carrier_opts)?;
    let one = C64::new(1.0, 0.0);
    let h1 = reconstruct(glue(reg1.clone(), Some(reg2.plus(one, &reg12)?), ("U1", "U2+U12"))?);
    let h2 = reconstruct(glue(reg2.clone(), Some(reg1.plus(-one, &reg12)?), ("U2", "U1-U12"))?);
    Ok(LocalFlow {
        a,
        b,
        ell,
        u1,
        u2,
        difference: difference.to_vec(),
        reg1,
        reg2,
        reg12,
        h1,
        h2,
        radius: RadiusReport::new(r, ell),
    })
}

impl LocalFlow {
    /// Largest `|u₁(φ) − u₂(φ) − Σ c_k φ(w_k)|` over the given test functions.
    pub fn difference_check(&self, phis: &[TestFunction]) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for phi in phis {
            let a = apply(&self.u1, phi, &ApplyOptions::default())?.value;
            let b = apply(&self.u2, phi, &ApplyOptions::default())?.value;
            let c: C64 = self.difference.iter().map(|(c, w)| c * phi.eval(&[*w])).sum();
            let d = (a - b - c).norm();
            worst = if d.is_nan() || worst.is_nan() {
                f64::NAN
            } else {
                worst.max(d)
            };
        }
        Ok(worst)
    }

    pub fn upper_path(&self, truncation: f64) -> Result<ProbePath> {
        ProbePath::new(self.a, self.b, self.ell, truncation, Side::Upper)
    }

    pub fn lower_path(&self, truncation: f64) -> Result<ProbePath> {
        ProbePath::new(self.a, self.b, self.ell, truncation, Side::Lower)
    }
}

/// Five-segment path `C` (or its mirror `C′`) around the carrier box:
/// `[−X, a−2ℓ]`, `[a−2ℓ, a±2iℓ]`, `[a±2iℓ, b±2iℓ]`, `[b±2iℓ, b+2ℓ]`, `[b+2ℓ, X]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbePath {
    pub a: f64,
    pub b: f64,
    pub ell: f64,
    pub truncation: f64,
    pub side: Side,
    pub segments: Vec<Segment>,
}

impl ProbePath {
    pub fn new(a: f64, b: f64, ell: f64, truncation: f64, side: Side) -> Result<Self> {
        if !(a <= b && ell > 0.0) {
            return Err(Error::invalid("probe path needs a <= b and ℓ > 0"));
        }
        let (left, right) = (a - 2.0 * ell, b + 2.0 * ell);
        if !(truncation > left.abs().max(right.abs())) {
            return Err(Error::invalid("probe path truncation must exceed the corner abscissae"));
        }
        let y = match side {
            Side::Upper => 2.0 * ell,
            Side::Lower => -2.0 * ell,
        };
        let p = [
            C64::new(-truncation, 0.0),
            C64::new(left, 0.0),
            C64::new(a, y),
            C64::new(b, y),
            C64::new(right, 0.0),
            C64::new(truncation, 0.0),
        ];
        let segments = p.windows(2).map(|w| Segment::new(w[0], w[1])).collect();
        Ok(ProbePath {
            a,
            b,
            ell,
            truncation,
            side,
            segments,
        })
    }

    /// `ξ < a − 2ℓ` or `ξ > b + 2ℓ`.
    pub fn admits(&self, xi: f64) -> bool {
        xi < self.a - 2.0 * self.ell || xi > self.b + 2.0 * self.ell
    }

    /// Smallest distance from the path to the carrier box, sampled along
    /// every segment.
    pub fn carrier_margin(&self) -> f64 {
        let mut best = f64::INFINITY;
        for s in &self.segments {
            for k in 0..=2000 {
                let z = s.start + (s.end - s.start) * (k as f64 / 2000.0);
                let dx = (self.a - z.re).max(z.re - self.b).max(0.0);
                let dy = (z.im.abs() - self.ell).max(0.0);
                best = best.min(dx.hypot(dy));
            }
        }
        best
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeOptions {
    pub ladder: LadderSpec,
    /// Gauss–Legendre panel length along the path.
    pub panel: f64,
    pub order: usize,
    pub tolerance: f64,
    /// Half-width `X` of the path; default `max(|ξ|, |a − 2ℓ|, |b + 2ℓ|) + 8`.
    pub truncation: Option<f64>,
}

impl Default for ProbeOptions {
    fn default() -> Self {
        ProbeOptions {
            ladder: LadderSpec::geometric(0.02, 0.5, 6, 3).expect("default probe ladder is valid"),
            panel: 0.02,
            order: 12,
            tolerance: 1e-5,
            truncation: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeRow {
    pub xi: f64,
    /// Ladder limit of `∫_C H₁ E_ξ^t dz`.
    pub h1_limit: C64,
    /// Ladder limit of `∫_{C′} H₂ E_ξ^t dz`.
    pub h2_limit: C64,
    pub h1_confidence: f64,
    pub h2_confidence: f64,
    pub h1_direct: C64,
    pub h2_direct: C64,
    /// `|h₁ − h₂|`.
    pub difference: f64,
    /// `max_j |h_j − H_j(ξ)|`.
    pub direct_deviation: f64,
    pub oracle: Option<C64>,
    pub oracle_deviation: Option<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeEqualityReport {
    pub rows: Vec<ProbeRow>,
    pub truncation: f64,
    /// Bound on the probe mass dropped beyond `|Re z| = X`.
    pub truncation_tail: f64,
    pub path_nodes: usize,
    pub carrier_margin: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Heat-probe comparison of `H₁` along `C` and `H₂` along `C′` at real
/// points `ξ` outside `[a − 2ℓ, b + 2ℓ]`.
pub fn probe_equality(
    flow: &LocalFlow,
    xis: &[f64],
    opts: &ProbeOptions,
    oracle: Option<&(dyn Fn(C64) -> C64 + Sync)>,
) -> Result<ProbeEqualityReport> {
    let band = (flow.a - 2.0 * flow.ell, flow.b + 2.0 * flow.ell);
    if xis.is_empty() {
        return Err(Error::invalid("no probe points given"));
    }
    if let Some(xi) = xis.iter().find(|&&x| !(x < band.0 || x > band.1)) {
        return Err(Error::invalid(format!(
            "ξ = {xi} lies inside [{}, {}], where the path argument gives no conclusion",
            band.0, band.1
        )));
    }
    let reach = xis.iter().fold(band.0.abs().max(band.1.abs()), |m, x| m.max(x.abs()));
    let truncation = opts.truncation.unwrap_or(reach + 8.0);
    let upper = flow.upper_path(truncation)?;
    let lower = flow.lower_path(truncation)?;
    let rule = GaussLegendre::new(opts.order);
    let cached = |path: &ProbePath, h: &ContinuedFunction| -> Result<Vec<(C64, C64, C64)>> {
        polyline_nodes(&path.segments, opts.panel, &rule)
            .into_par_iter()
            .map(|(z, w)| Ok((z, w, h.eval(z)?.value)))
            .collect()
    };
    let c_nodes = cached(&upper, &flow.h1)?;
    let c_prime_nodes = cached(&lower, &flow.h2)?;

    let t_max = opts.ladder.ts()[0];
    let h_end = c_nodes
        .iter()
        .chain(&c_prime_nodes)
        .filter(|(z, _, _)| z.re.abs() > truncation - 1.0)
        .map(|(_, _, h)| h.norm())
        .fold(0.0, f64::max);
    let gap = xis.iter().map(|x| truncation - x.abs()).fold(f64::INFINITY, f64::min);
    let truncation_tail =
        h_end * (4.0 * std::f64::consts::PI * t_max).sqrt().recip() * (-gap * gap / (4.0 * t_max)).exp();

    let mut rows = Vec::with_capacity(xis.len());
    for &xi in xis {
        let pair = |nodes: &[(C64, C64, C64)]| -> Result<Vec<C64>> {
            opts.ladder.evaluate(|t| {
                let e = heat_probe(&[xi], t)?;
                Ok(nodes.iter().map(|(z, w, h)| w * h * e.eval(&[*z])).sum())
            })
        };
        let l1 = ladder_limit(&pair(&c_nodes)?, &opts.ladder)?;
        let l2 = ladder_limit(&pair(&c_prime_nodes)?, &opts.ladder)?;
        let z = C64::new(xi, 0.0);
        let h1_direct = flow.h1.eval(z)?.value;
        let h2_direct = flow.h2.eval(z)?.value;
        let difference = (l1.value - l2.value).norm();
        let direct_deviation = (l1.value - h1_direct).norm().max((l2.value - h2_direct).norm());
        let oracle_value = oracle.map(|o| o(z));
        let oracle_deviation = oracle_value.map(|o| (l1.value - o).norm().max((l2.value - o).norm()));
        let passed = difference < opts.tolerance
            && direct_deviation < opts.tolerance
            && oracle_deviation.is_none_or(|d| d < opts.tolerance);
        rows.push(ProbeRow {
            xi,
            h1_limit: l1.value,
            h2_limit: l2.value,
            h1_confidence: l1.confidence,
            h2_confidence: l2.confidence,
            h1_direct,
            h2_direct,
            difference,
            direct_deviation,
            oracle: oracle_value,
            oracle_deviation,
            passed,
        });
    }
    let passed = rows.iter().all(|r| r.passed);
    Ok(ProbeEqualityReport {
        rows,
        truncation,
        truncation_tail,
        path_nodes: c_nodes.len() + c_prime_nodes.len(),
        carrier_margin: upper.carrier_margin().min(lower.carrier_margin()),
        tolerance: opts.tolerance,
        passed,
    })
}

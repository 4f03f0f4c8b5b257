use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::carrier::CarrierSet;
use super::cone::{dist_to_light_cone, Cone};
use crate::complex::{norm, C64};
use crate::error::{Error, Result};
use crate::quadrature::SphereRule;

/// Membership with a signed margin; `member ⟺ margin > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Membership {
    pub member: bool,
    pub margin: f64,
}

impl Membership {
    pub fn from_margin(margin: f64) -> Self {
        Membership {
            member: margin > 0.0,
            margin,
        }
    }
}

/// `ℓ/(√2 − 1)·(1 + 10⁻⁶)`, just above the radius threshold for the
/// ball-containment geometry.
pub fn auto_radius(ell: f64) -> f64 {
    ell / (std::f64::consts::SQRT_2 - 1.0) * (1.0 + 1e-6)
}

/// `O = {x : g_r(x) > r}`, margin `g_r(x) − r`.
pub fn region_o_membership(x: &[f64], carrier: &CarrierSet, r: f64) -> Result<Membership> {
    let g = carrier.g_r(x, r)?;
    Ok(Membership::from_margin(g.value - r))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QRegion {
    /// `{x < lo} ∪ {x > hi}` on the real line.
    OutsideInterval { lo: f64, hi: f64 },
    /// `{x ∈ ℝ⁴ : dist(x, V) > threshold}`.
    LightConeDistance { threshold: f64 },
    /// Points whose ball of radius `margin` lies in `O`, checked on samples.
    Sampled {
        carrier: CarrierSet,
        r: f64,
        margin: f64,
        ball_samples: usize,
    },
}

impl QRegion {
    pub fn contains(&self, x: &[f64]) -> Result<Membership> {
        match self {
            QRegion::OutsideInterval { lo, hi } => Ok(Membership::from_margin((lo - x[0]).max(x[0] - hi))),
            QRegion::LightConeDistance { threshold } => {
                if x.len() != 4 {
                    return Err(Error::invalid("light-cone region needs points of ℝ⁴"));
                }
                Ok(Membership::from_margin(dist_to_light_cone(x) - threshold))
            }
            QRegion::Sampled {
                carrier,
                r,
                margin,
                ball_samples,
            } => {
                let worst = ball_points(x, *margin, *ball_samples)
                    .iter()
                    .map(|p| region_o_membership(p, carrier, *r).map(|m| m.margin))
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .fold(f64::INFINITY, f64::min);
                Ok(Membership::from_margin(worst))
            }
        }
    }

    /// Whether the region is known to be empty.
    pub fn is_empty(&self) -> bool {
        matches!(self, QRegion::OutsideInterval { lo, hi } if lo > hi && lo.is_infinite())
    }
}

/// Closed ball sample: centre, ± axis points on the sphere and a fixed
/// pseudo-random fill.
fn ball_points(x: &[f64], radius: f64, count: usize) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut out = vec![x.to_vec()];
    for k in 0..n {
        for s in [-1.0, 1.0] {
            let mut p = x.to_vec();
            p[k] += s * radius;
            out.push(p);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    while out.len() < count.max(out.len()) {
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let len = norm(&v);
        if len == 0.0 || len > 1.0 {
            continue;
        }
        out.push(x.iter().zip(&v).map(|(a, b)| a + radius * b).collect());
    }
    out
}

/// `Q = {x : dist(x, ℝⁿ∖O) > margin}`.
///
/// Explicit for the box carrier (`O` is the outside of
/// `[a − τ, b + τ]`, `τ = √(ℓ(2r + ℓ))`) and for the light cone with
/// `r` at its threshold (`dist(x, V) > (√2 + 3)ℓ`); sampled otherwise.
pub fn region_q(carrier: &CarrierSet, r: f64, margin: f64) -> Result<QRegion> {
    if !(r > 0.0) || !(margin >= 0.0) {
        return Err(Error::invalid("region_q needs r > 0 and a nonnegative margin"));
    }
    Ok(match carrier {
        CarrierSet::Box1d { a, b, ell } => {
            let tau = (ell * (2.0 * r + ell)).sqrt();
            QRegion::OutsideInterval {
                lo: a - tau - margin,
                hi: b + tau + margin,
            }
        }
        CarrierSet::LightCone4d { ell, .. } => {
            // O ⊇ {dist(x, V) > √(ℓ(2r + ℓ))} by the distance bound on g_r, which is
            // (√2 + 1)ℓ at the threshold radius.
            let tau = (ell * (2.0 * r + ell)).sqrt();
            QRegion::LightConeDistance {
                threshold: tau + margin,
            }
        }
        CarrierSet::PointCloud { .. } => QRegion::Sampled {
            carrier: carrier.clone(),
            r,
            margin,
            ball_samples: 64,
        },
    })
}

/// Result of checking an explicit `Q` against the generic construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QVerification {
    pub points_checked: usize,
    pub balls_inside_o: usize,
    /// Smallest `g_r − r` seen on any sampled ball.
    pub min_margin: f64,
}

impl QVerification {
    pub fn passed(&self) -> bool {
        self.points_checked == self.balls_inside_o
    }
}

/// For every point of `points` inside `q`, checks that sampled points of
/// the ball of radius `margin` around it lie in `O`.
pub fn verify_q(
    q: &QRegion,
    carrier: &CarrierSet,
    r: f64,
    margin: f64,
    points: &[Vec<f64>],
    ball_samples: usize,
) -> Result<QVerification> {
    let mut report = QVerification {
        points_checked: 0,
        balls_inside_o: 0,
        min_margin: f64::INFINITY,
    };
    for x in points {
        if !q.contains(x)?.member {
            continue;
        }
        report.points_checked += 1;
        let mut inside = true;
        for p in ball_points(x, margin, ball_samples) {
            let m = region_o_membership(&p, carrier, r)?;
            report.min_margin = report.min_margin.min(m.margin);
            inside &= m.member;
        }
        if inside {
            report.balls_inside_o += 1;
        }
    }
    Ok(report)
}

/// Which tube-domain predicate to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tube {
    /// `dist(Im z, Γ) < r`.
    V1,
    /// `dist(Im z, −Γ) < r`.
    V2,
    /// `|Im(z − w)|² < r² + |Re(z − w)|²` for every sampled `w ∈ L`.
    Z,
    /// `|Im z| < c`.
    Strip,
}

#[derive(Debug, Clone)]
pub struct TubeParams {
    pub cone: Cone,
    pub r: f64,
    /// Sample of the carrier used by the `Z` predicate.
    pub carrier_sample: Vec<Vec<C64>>,
    pub strip: f64,
}

pub fn tube_membership(z: &[C64], which: Tube, params: &TubeParams) -> Result<Membership> {
    let im: Vec<f64> = z.iter().map(|c| c.im).collect();
    match which {
        Tube::V1 => Ok(Membership::from_margin(params.r - params.cone.distance(&im)?)),
        Tube::V2 => Ok(Membership::from_margin(params.r - params.cone.negated().distance(&im)?)),
        Tube::Strip => Ok(Membership::from_margin(params.strip - norm(&im))),
        Tube::Z => {
            if params.carrier_sample.is_empty() {
                return Err(Error::invalid("Z membership needs a nonempty carrier sample"));
            }
            let mut margin = f64::INFINITY;
            for w in &params.carrier_sample {
                if w.len() != z.len() {
                    return Err(Error::invalid("Z membership: dimension mismatch"));
                }
                let re2: f64 = z.iter().zip(w).map(|(a, b)| (a.re - b.re).powi(2)).sum();
                let im2: f64 = z.iter().zip(w).map(|(a, b)| (a.im - b.im).powi(2)).sum();
                margin = margin.min(params.r * params.r + re2 - im2);
            }
            Ok(Membership::from_margin(margin))
        }
    }
}

/// Outcome of testing `|Im z| < g_r(Re z) ⇒ z ∈ Z` on random points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InclusionCheck {
    pub samples: usize,
    pub violations: usize,
    pub min_z_margin: f64,
}

pub fn imaginary_inclusion_check(
    carrier: &CarrierSet,
    r: f64,
    samples: usize,
    extent: f64,
    seed: u64,
) -> Result<InclusionCheck> {
    let n = carrier.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let carrier_sample = carrier.sample(400, extent + 2.0, seed ^ 0x9e37);
    let params = TubeParams {
        cone: Cone::forward(n)?,
        r,
        carrier_sample,
        strip: 0.0,
    };
    let mut report = InclusionCheck {
        samples,
        violations: 0,
        min_z_margin: f64::INFINITY,
    };
    for _ in 0..samples {
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-extent..=extent)).collect();
        let g = carrier.g_r(&x, r)?.value;
        if g <= 0.0 {
            report.samples -= 1;
            continue;
        }
        let dir: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let len = norm(&dir).max(1e-12);
        let scale = g * rng.random_range(0.0..0.999);
        let z: Vec<C64> = x
            .iter()
            .zip(&dir)
            .map(|(re, d)| C64::new(*re, scale * d / len))
            .collect();
        let m = tube_membership(&z, Tube::Z, &params)?;
        report.min_z_margin = report.min_z_margin.min(m.margin);
        if !m.member {
            report.violations += 1;
        }
    }
    Ok(report)
}

/// `W_{r,δ} = {y : dist(y, Γ) < r} ∪ B_{r+δ}` and the sampled intersection
/// `⋂_{|ω|=1} (W_{r,δ} + rω)`.
#[derive(Debug, Clone)]
pub struct WRegion {
    pub cone: Cone,
    pub r: f64,
    pub delta: f64,
    rule: SphereRule,
}

impl WRegion {
    pub fn new(cone: Cone, r: f64, delta: f64, rule: SphereRule, min_nodes: usize) -> Result<Self> {
        if rule.dim() != cone.dim() {
            return Err(Error::invalid("sphere rule and cone dimensions differ"));
        }
        rule.require_nodes(min_nodes)?;
        if !(r > 0.0) || !(delta >= 0.0) {
            return Err(Error::invalid("W region needs r > 0 and δ ≥ 0"));
        }
        Ok(WRegion { cone, r, delta, rule })
    }

    pub fn w_margin(&self, y: &[f64]) -> Result<f64> {
        let tube = self.r - self.cone.distance(y)?;
        let ball = self.r + self.delta - norm(y);
        Ok(tube.max(ball))
    }

    /// Margin in the sampled intersection minus the shrink `r·max_gap`.
    pub fn intersection_margin(&self, y: &[f64]) -> Result<f64> {
        let mut worst = f64::INFINITY;
        for w in self.rule.nodes() {
            let shifted: Vec<f64> = y.iter().zip(w).map(|(a, b)| a - self.r * b).collect();
            worst = worst.min(self.w_margin(&shifted)?);
        }
        Ok(worst - self.shrink())
    }

    pub fn shrink(&self) -> f64 {
        self.r * self.rule.max_gap()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WReport {
    pub r: f64,
    pub delta: f64,
    pub ell: f64,
    /// `r + δ` and `√((r/√2)² + (r/√2 − ℓ)²)`.
    pub condition_lhs: f64,
    pub condition_rhs: f64,
    pub condition_holds: bool,
    pub shrink: f64,
    pub gamma_points: usize,
    pub gamma_min_margin: f64,
    pub gamma_contained: bool,
    pub ball_min_margin: f64,
    pub ball_contained: bool,
}

/// Evaluates the sampled intersection on points of Γ and on the ball `B_δ/2`.
pub fn w_r_delta_and_gamma_tilde(
    cone: &Cone,
    r: f64,
    delta: f64,
    rule: SphereRule,
    min_nodes: usize,
) -> Result<WReport> {
    let n = cone.dim();
    let ell = cone.shift();
    let region = WRegion::new(cone.clone(), r, delta, rule, min_nodes)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let rhs = ((r * s).powi(2) + (r * s - ell).powi(2)).sqrt();

    let apex = cone.apex();
    let sign = if cone.is_negated() { -1.0 } else { 1.0 };
    let axis: Vec<f64> = cone.axis().iter().map(|a| sign * a).collect();
    let perp = orthogonal_unit(cone.axis());
    let along = |s: f64, u: f64| -> Vec<f64> {
        (0..n)
            .map(|k| apex[k] + s * axis[k] + perp.as_ref().map_or(0.0, |q| u * q[k]))
            .collect()
    };

    // Apex and boundary points within δ/2 of it (closure points of Γ), then
    // interior points at least twice the shrink margin deep.
    let mut gamma_points = vec![apex.clone()];
    if perp.is_some() {
        for t in [0.25 * delta, 0.5 * delta] {
            if t > 0.0 {
                let h = t * s;
                gamma_points.push(along(h, h));
                gamma_points.push(along(h, -h));
            }
        }
    }
    let min_depth = 2.0 * region.shrink();
    let base = if n == 1 {
        min_depth
    } else {
        std::f64::consts::SQRT_2 * min_depth
    };
    for extra in [0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0] {
        let depth = base + extra;
        gamma_points.push(along(depth, 0.0));
        if perp.is_some() {
            gamma_points.push(along(depth, extra));
            gamma_points.push(along(depth, -extra));
        }
    }
    let mut gamma_min = f64::INFINITY;
    for p in &gamma_points {
        gamma_min = gamma_min.min(region.intersection_margin(p)?);
    }

    let (ball_min, ball_ok) = if delta > 0.0 {
        let mut worst = region.intersection_margin(&vec![0.0; n])?;
        for w in region.rule.nodes() {
            let p: Vec<f64> = w.iter().map(|c| 0.5 * delta * c).collect();
            worst = worst.min(region.intersection_margin(&p)?);
        }
        (worst, worst > 0.0)
    } else {
        (f64::NEG_INFINITY, false)
    };

    Ok(WReport {
        r,
        delta,
        ell,
        condition_lhs: r + delta,
        condition_rhs: rhs,
        condition_holds: r + delta > rhs,
        shrink: region.shrink(),
        gamma_points: gamma_points.len(),
        gamma_min_margin: gamma_min,
        gamma_contained: gamma_min > 0.0,
        ball_min_margin: ball_min,
        ball_contained: ball_ok,
    })
}

/// A unit vector orthogonal to `axis`, if the dimension allows one.
fn orthogonal_unit(axis: &[f64]) -> Option<Vec<f64>> {
    let n = axis.len();
    (0..n).find_map(|k| {
        let mut v = vec![0.0; n];
        v[k] = 1.0;
        let proj: f64 = axis[k];
        for (vi, ai) in v.iter_mut().zip(axis) {
            *vi -= proj * ai;
        }
        let len = norm(&v);
        (len > 0.5).then(|| v.iter().map(|c| c / len).collect())
    })
}

/// A witness `y = λa + (1 − λ)b` with `a` in the base of `V₁` and `b` in
/// the base of `V₂`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HullWitness {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub lambda: f64,
    pub margin: f64,
}

/// Membership of `y` in the convex hull of
/// `{dist(·, Γ) < r} ∪ {dist(·, −Γ) < r}` for n ∈ {1, 2}, by searching
/// pairs along the cone axis and a fan of directions.
pub fn convex_hull_membership(y: &[f64], cone: &Cone, r: f64) -> Result<Option<HullWitness>> {
    let n = cone.dim();
    if !(1..=2).contains(&n) || y.len() != n {
        return Err(Error::invalid("convex hull membership is implemented for n = 1, 2"));
    }
    let neg = cone.negated();
    let m1 = |p: &[f64]| cone.distance(p).map(|d| r - d);
    let m2 = |p: &[f64]| neg.distance(p).map(|d| r - d);
    let direct = m1(y)?.max(m2(y)?);
    if direct > 0.0 {
        let lambda = if m1(y)? > 0.0 { 1.0 } else { 0.0 };
        return Ok(Some(HullWitness {
            a: y.to_vec(),
            b: y.to_vec(),
            lambda,
            margin: direct,
        }));
    }
    let dirs: Vec<Vec<f64>> = if n == 1 {
        vec![vec![1.0]]
    } else {
        (0..64)
            .map(|k| {
                let a = std::f64::consts::PI * k as f64 / 64.0;
                vec![a.cos(), a.sin()]
            })
            .collect()
    };
    let mut best: Option<HullWitness> = None;
    for d in &dirs {
        for k in 0..40 {
            let s = 0.25 * 1.5f64.powi(k);
            let a: Vec<f64> = y.iter().zip(d).map(|(p, q)| p + s * q).collect();
            let b: Vec<f64> = y.iter().zip(d).map(|(p, q)| p - s * q).collect();
            let margin = m1(&a)?.min(m2(&b)?);
            if margin > 0.0 && best.as_ref().is_none_or(|w| margin > w.margin) {
                best = Some(HullWitness {
                    a,
                    b,
                    lambda: 0.5,
                    margin,
                });
            }
        }
    }
    Ok(best)
}

/// The surface `S₁ = {y₁ = f₁(x), y_j = 0 (j ≥ 2)}`: `f₁ = 0` on `O`,
/// `f₁ = ℓ + δ` where `g_r < √((r/√2)² + (r/√2 − ℓ)²)`, linear in `g_r`
/// in between.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfaceS1 {
    pub r: f64,
    pub ell: f64,
    pub delta: f64,
    pub inner: f64,
}

impl SurfaceS1 {
    pub fn new(r: f64, ell: f64, delta: f64) -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let inner = ((r * s).powi(2) + (r * s - ell).powi(2)).sqrt();
        SurfaceS1 { r, ell, delta, inner }
    }

    pub fn height_for(&self, g: f64) -> f64 {
        let top = self.ell + self.delta;
        if g >= self.r {
            0.0
        } else if g <= self.inner {
            top
        } else {
            top * (self.r - g) / (self.r - self.inner)
        }
    }

    pub fn height_at(&self, x: &[f64], carrier: &CarrierSet) -> Result<f64> {
        Ok(self.height_for(carrier.g_r(x, self.r)?.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::cone::Cone;

    #[test]
    fn point_cloud_region_o_threshold() {
        let l = CarrierSet::point_cloud(vec![vec![C64::new(0.0, 0.5)]]).unwrap();
        let t = 1.25f64.sqrt();
        assert!(region_o_membership(&[t + 1e-6], &l, 1.0).unwrap().member);
        assert!(!region_o_membership(&[t - 1e-6], &l, 1.0).unwrap().member);
        let q = region_q(&l, 1.0, 1.0).unwrap();
        assert!(q.contains(&[t + 1.0 + 1e-3]).unwrap().member);
        assert!(!q.contains(&[t + 1.0 - 1e-3]).unwrap().member);
    }

    #[test]
    fn box_q_is_interval_arithmetic() {
        let l = CarrierSet::box1d(0.0, 0.0, 0.5).unwrap();
        let q = region_q(&l, 1.0, 1.0).unwrap();
        assert_eq!(
            q,
            QRegion::OutsideInterval {
                lo: -(1.25f64.sqrt() + 1.0),
                hi: 1.25f64.sqrt() + 1.0
            }
        );
    }

    #[test]
    fn overlap_of_v1_and_v2_in_one_dimension() {
        let cone = Cone::forward(1).unwrap().with_shift(0.5).unwrap();
        let p = TubeParams {
            cone,
            r: 1.0,
            carrier_sample: vec![],
            strip: 0.4,
        };
        let z = [C64::new(0.0, 0.0)];
        assert!(tube_membership(&z, Tube::V1, &p).unwrap().member);
        assert!(tube_membership(&z, Tube::V2, &p).unwrap().member);
        assert!(tube_membership(&[C64::new(3.0, 0.49)], Tube::V1, &p).unwrap().member);
        assert!(!tube_membership(&[C64::new(3.0, -0.51)], Tube::V1, &p).unwrap().member);
        assert!(tube_membership(&[C64::new(0.0, 7.0)], Tube::V1, &p).unwrap().member);
    }

    #[test]
    fn gamma_tilde_in_the_plane() {
        let cone = Cone::forward(2).unwrap().with_shift(1.0).unwrap();
        let rule = SphereRule::standard(2).unwrap();
        let rep = w_r_delta_and_gamma_tilde(&cone, 3.0, 0.5, rule.clone(), 64).unwrap();
        assert!(rep.condition_holds);
        assert!((rep.condition_rhs - 2.399_45).abs() < 1e-4, "{}", rep.condition_rhs);
        assert!(rep.gamma_contained && rep.ball_contained, "{rep:?}");
        let zero = w_r_delta_and_gamma_tilde(&cone, 3.0, 0.0, rule.clone(), 64).unwrap();
        assert!(!zero.ball_contained);
        let coarse = SphereRule::circle(16).unwrap();
        assert!(w_r_delta_and_gamma_tilde(&cone, 3.0, 0.5, coarse, 64).is_err());
        let w = WRegion::new(cone, 3.0, 0.5, rule, 64).unwrap();
        assert!(w.intersection_margin(&[10.0, 0.0]).unwrap() > 0.0);
    }

    #[test]
    fn hull_of_opposite_tubes_covers_the_plane() {
        let cone = Cone::forward(2).unwrap().with_shift(1.0).unwrap();
        for y in [[0.0, 0.0], [0.0, 25.0], [-3.0, -40.0]] {
            let w = convex_hull_membership(&y, &cone, 0.5).unwrap().expect("witness");
            assert!(w.margin > 0.0);
            for k in 0..2 {
                let mix = w.lambda * w.a[k] + (1.0 - w.lambda) * w.b[k];
                assert!((mix - y[k]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn surface_height_is_piecewise_linear() {
        let s = SurfaceS1::new(3.0, 1.0, 0.2);
        assert_eq!(s.height_for(3.5), 0.0);
        assert_eq!(s.height_for(s.inner - 0.1), 1.2);
        let mid = 0.5 * (3.0 + s.inner);
        assert!((s.height_for(mid) - 0.6).abs() < 1e-12);
    }
}

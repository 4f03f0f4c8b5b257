use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::cone::{dist_to_light_cone, project_light_cone};
use crate::complex::{im_norm, norm, C64};
use crate::error::{Error, Result};

pub const DEFAULT_LIGHTCONE_SAMPLES: usize = 100_000;

/// Compact (or locally compact) set carrying an analytic functional.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CarrierSet {
    /// `[a, b] + i[−ℓ, ℓ]` in ℂ.
    Box1d { a: f64, b: f64, ell: f64 },
    /// `{w ∈ ℂ⁴ : ∃x ∈ V, |Re w − x| + |Im w|₁ < ℓ}` with `V` the closed
    /// double light cone and `|y|₁ = |y₀| + |(y₁, y₂, y₃)|`.
    LightCone4d { ell: f64, samples: usize, seed: u64 },
    /// Finitely many points of ℂⁿ.
    PointCloud { points: Vec<Vec<C64>> },
}

/// Value of `g_r(x) = inf_{w∈L} √(r² + |x − Re w|²) − |Im w|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrEstimate {
    pub value: f64,
    /// Upper bound on `value − g_r(x)` (0 where the formula is exact).
    pub resolution: f64,
    /// `√(r² + dist(x, V)²) − ℓ` for the light-cone carrier.
    pub distance_bound: Option<f64>,
}

impl CarrierSet {
    pub fn box1d(a: f64, b: f64, ell: f64) -> Result<Self> {
        if !(a <= b) || !(ell >= 0.0) {
            return Err(Error::invalid(format!(
                "invalid carrier box [{a}, {b}] + i[−{ell}, {ell}]"
            )));
        }
        Ok(CarrierSet::Box1d { a, b, ell })
    }

    pub fn lightcone4d(ell: f64) -> Result<Self> {
        if !(ell > 0.0) {
            return Err(Error::invalid("light-cone neighbourhood needs ℓ > 0"));
        }
        Ok(CarrierSet::LightCone4d {
            ell,
            samples: DEFAULT_LIGHTCONE_SAMPLES,
            seed: 0,
        })
    }

    pub fn point_cloud(points: Vec<Vec<C64>>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::invalid("empty carrier"));
        };
        let n = first.len();
        if n == 0 || points.iter().any(|p| p.len() != n) {
            return Err(Error::invalid("carrier points must share a positive dimension"));
        }
        Ok(CarrierSet::PointCloud { points })
    }

    /// Sampling density and seed for the light-cone infimum; ignored otherwise.
    pub fn with_sampling(self, samples: usize, seed: u64) -> Self {
        match self {
            CarrierSet::LightCone4d { ell, .. } => CarrierSet::LightCone4d { ell, samples, seed },
            other => other,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            CarrierSet::Box1d { .. } => 1,
            CarrierSet::LightCone4d { .. } => 4,
            CarrierSet::PointCloud { points } => points[0].len(),
        }
    }

    /// Largest `|Im w|` over the carrier.
    pub fn im_extent(&self) -> f64 {
        match self {
            CarrierSet::Box1d { ell, .. } | CarrierSet::LightCone4d { ell, .. } => *ell,
            CarrierSet::PointCloud { points } => points.iter().map(|p| im_norm(p)).fold(0.0, f64::max),
        }
    }

    /// Closure membership test for the defining inequality.
    pub fn contains(&self, w: &[C64]) -> Result<bool> {
        if w.len() != self.dim() {
            return Err(Error::invalid("carrier membership: dimension mismatch"));
        }
        Ok(match self {
            CarrierSet::Box1d { a, b, ell } => w[0].re >= *a && w[0].re <= *b && w[0].im.abs() <= *ell,
            CarrierSet::LightCone4d { ell, .. } => {
                let re: Vec<f64> = w.iter().map(|c| c.re).collect();
                dist_to_light_cone(&re) + l1_time_space(w) <= *ell
            }
            CarrierSet::PointCloud { points } => points.iter().any(|p| p.as_slice() == w),
        })
    }

    /// Random points of the carrier; the light-cone variant is restricted to
    /// `|Re w| ≤ radius`. Point clouds return their points.
    pub fn sample(&self, count: usize, radius: f64, seed: u64) -> Vec<Vec<C64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match self {
            CarrierSet::Box1d { a, b, ell } => {
                let mut out = vec![
                    vec![C64::new(*a, *ell)],
                    vec![C64::new(*a, -*ell)],
                    vec![C64::new(*b, *ell)],
                    vec![C64::new(*b, -*ell)],
                ];
                while out.len() < count {
                    let x = if a == b { *a } else { rng.random_range(*a..=*b) };
                    let y = if *ell == 0.0 {
                        0.0
                    } else {
                        rng.random_range(-*ell..=*ell)
                    };
                    out.push(vec![C64::new(x, y)]);
                }
                out.truncate(count.max(1));
                out
            }
            CarrierSet::LightCone4d { ell, .. } => {
                let mut out = Vec::with_capacity(count);
                while out.len() < count {
                    // A point of V, pushed off by a random real offset and an
                    // imaginary part sharing the remaining ℓ budget.
                    let t: f64 = rng.random_range(-radius..=radius);
                    let dir = unit_vector(&mut rng, 3);
                    let s = t.abs() * rng.random_range(0.0..=1.0f64);
                    let mut base = [t, s * dir[0], s * dir[1], s * dir[2]];
                    let budget = ell * rng.random_range(0.0..1.0f64);
                    let off = unit_vector(&mut rng, 4);
                    let used = budget * rng.random_range(0.0..=1.0f64);
                    for (b, o) in base.iter_mut().zip(&off) {
                        *b += used * o;
                    }
                    let im_budget = budget - used;
                    let split: f64 = rng.random_range(0.0..=1.0);
                    let sdir = unit_vector(&mut rng, 3);
                    let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                    let im = [
                        sign * split * im_budget,
                        (1.0 - split) * im_budget * sdir[0],
                        (1.0 - split) * im_budget * sdir[1],
                        (1.0 - split) * im_budget * sdir[2],
                    ];
                    out.push(base.iter().zip(im).map(|(&re, im)| C64::new(re, im)).collect());
                }
                out
            }
            CarrierSet::PointCloud { points } => points.clone(),
        }
    }

    /// `g_r(x)` by exact formula (box, point cloud) or sampling plus local
    /// refinement (light cone).
    pub fn g_r(&self, x: &[f64], r: f64) -> Result<GrEstimate> {
        if !(r > 0.0) {
            return Err(Error::invalid("g_r needs r > 0"));
        }
        if x.len() != self.dim() {
            return Err(Error::invalid(format!(
                "g_r: point of dimension {} for a carrier in dimension {}",
                x.len(),
                self.dim()
            )));
        }
        match self {
            CarrierSet::Box1d { a, b, ell } => {
                let d = if x[0] < *a {
                    a - x[0]
                } else if x[0] > *b {
                    x[0] - b
                } else {
                    0.0
                };
                Ok(GrEstimate {
                    value: (r * r + d * d).sqrt() - ell,
                    resolution: 0.0,
                    distance_bound: None,
                })
            }
            CarrierSet::PointCloud { points } => {
                let value = points
                    .iter()
                    .map(|w| {
                        let d2: f64 = w.iter().zip(x).map(|(c, xi)| (xi - c.re).powi(2)).sum();
                        (r * r + d2).sqrt() - im_norm(w)
                    })
                    .fold(f64::INFINITY, f64::min);
                Ok(GrEstimate {
                    value,
                    resolution: 0.0,
                    distance_bound: None,
                })
            }
            CarrierSet::LightCone4d { ell, samples, seed } => Ok(lightcone_g_r(x, r, *ell, *samples, *seed)),
        }
    }
}

fn l1_time_space(w: &[C64]) -> f64 {
    w[0].im.abs() + norm(&[w[1].im, w[2].im, w[3].im])
}

fn unit_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let len = norm(&v);
        if len > 1e-3 && len <= 1.0 {
            return v.iter().map(|c| c / len).collect();
        }
    }
}

/// For a real part `p` with `dist(p, V) = d ≤ ℓ` the largest admissible
/// `|Im w|` is `ℓ − d` (all of the ℓ₁ budget in one coordinate), so
/// `g_r(x) = inf_p √(r² + |x − p|²) − (ℓ − dist(p, V))`.
fn lightcone_g_r(x: &[f64], r: f64, ell: f64, samples: usize, seed: u64) -> GrEstimate {
    let objective = |p: &[f64]| -> Option<f64> {
        let d = dist_to_light_cone(p);
        if d > ell {
            return None;
        }
        let s2: f64 = p.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum();
        Some((r * r + s2).sqrt() - (ell - d))
    };

    let y = dist_to_light_cone(x);
    let half = y + ell;
    let per_axis = ((samples.max(1) as f64).powf(0.25).ceil() as usize).max(1);
    let cell = 2.0 * half / per_axis as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::INFINITY;
    let mut best_p = x.to_vec();
    let mut p = [0.0; 4];
    for i0 in 0..per_axis {
        for i1 in 0..per_axis {
            for i2 in 0..per_axis {
                for i3 in 0..per_axis {
                    for (k, idx) in [i0, i1, i2, i3].into_iter().enumerate() {
                        let jitter: f64 = rng.random_range(0.0..1.0);
                        p[k] = x[k] - half + (idx as f64 + jitter) * cell;
                    }
                    if let Some(v) = objective(&p) {
                        if v < best {
                            best = v;
                            best_p = p.to_vec();
                        }
                    }
                }
            }
        }
    }

    // Projected gradient descent of √(r² + |x − p|²) over the closed cone,
    // a subset of the admissible real parts.
    let mut q = project_light_cone(&best_p);
    for _ in 0..2000 {
        let diff: Vec<f64> = q.iter().zip(x).map(|(a, b)| a - b).collect();
        let scale = r / (r * r + diff.iter().map(|v| v * v).sum::<f64>()).sqrt();
        let step: Vec<f64> = q.iter().zip(&diff).map(|(a, d)| a - scale * d).collect();
        let next = project_light_cone(&step);
        let moved: f64 = next.iter().zip(&q).map(|(a, b)| (a - b).abs()).sum();
        q = next;
        if moved < 1e-15 {
            break;
        }
    }
    if let Some(v) = objective(&q) {
        best = best.min(v);
    }
    let cell_radius = cell; // half-diagonal of a 4-cube with side `cell`
    GrEstimate {
        value: best,
        resolution: 2.0 * cell_radius,
        distance_bound: Some((r * r + y * y).sqrt() - ell),
    }
}

pub fn g_r(x: &[f64], carrier: &CarrierSet, r: f64) -> Result<GrEstimate> {
    carrier.g_r(x, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn single_point_values() {
        let l = CarrierSet::point_cloud(vec![vec![C64::new(0.0, 0.5)]]).unwrap();
        assert_abs_diff_eq!(l.g_r(&[0.0], 1.0).unwrap().value, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(l.g_r(&[2.0], 1.0).unwrap().value, 5f64.sqrt() - 0.5, epsilon = 1e-15);
        assert!(CarrierSet::point_cloud(vec![]).is_err());
    }

    #[test]
    fn box_matches_its_corner_cloud() {
        let bx = CarrierSet::box1d(-0.1, 0.1, 0.5).unwrap();
        for x in [-2.0, -0.05, 0.0, 0.7, 3.0] {
            let dense: Vec<Vec<C64>> = (0..=200)
                .flat_map(|k| {
                    let re = -0.1 + 0.2 * k as f64 / 200.0;
                    [vec![C64::new(re, 0.5)], vec![C64::new(re, -0.5)]]
                })
                .collect();
            let cloud = CarrierSet::point_cloud(dense).unwrap();
            let exact = bx.g_r(&[x], 1.3).unwrap().value;
            let approx = cloud.g_r(&[x], 1.3).unwrap().value;
            assert!(approx >= exact - 1e-15 && approx - exact < 1e-5);
        }
    }

    #[test]
    fn light_cone_refinement_reaches_the_bound() {
        let l = CarrierSet::lightcone4d(1.0).unwrap().with_sampling(4096, 7);
        let r = 2.5;
        for d in [0.0, 0.5, 2.0, 4.0] {
            let x = [0.3, d * std::f64::consts::SQRT_2 + 0.3, 0.0, 0.0];
            let est = l.g_r(&x, r).unwrap();
            let bound = est.distance_bound.unwrap();
            assert!(est.value <= bound + 1e-3);
            assert!(est.value >= bound - 1e-9, "{} vs {bound}", est.value);
        }
    }

    #[test]
    fn samples_satisfy_defining_inequalities() {
        let l = CarrierSet::lightcone4d(1.0).unwrap();
        for w in l.sample(500, 5.0, 3) {
            assert!(l.contains(&w).unwrap());
        }
        let bx = CarrierSet::box1d(-0.1, 0.1, 0.5).unwrap();
        for w in bx.sample(100, 0.0, 3) {
            assert!(bx.contains(&w).unwrap());
        }
    }
}

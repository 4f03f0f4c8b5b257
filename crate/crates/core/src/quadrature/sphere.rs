use std::f64::consts::PI;

use super::gauss::GaussLegendre;
use crate::complex::C64;
use crate::error::{Error, Result};

pub const DEFAULT_CIRCLE_NODES: usize = 256;
pub const DEFAULT_POLAR_ORDER: usize = 17;
pub const DEFAULT_AZIMUTH_COUNT: usize = 35;

/// Quadrature rule on the unit sphere `S^{n−1}` with weights summing to the
/// surface measure (2, 2π, 4π for n = 1, 2, 3).
#[derive(Debug, Clone, PartialEq)]
pub struct SphereRule {
    dim: usize,
    nodes: Vec<Vec<f64>>,
    weights: Vec<f64>,
    max_gap: f64,
}

impl SphereRule {
    /// Default rule for dimension `n`: `{±1}`, 256 equi-angular nodes, or the
    /// 17 × 35 Gauss–Legendre × uniform-azimuth product grid.
    pub fn standard(n: usize) -> Result<Self> {
        match n {
            1 => Ok(Self::two_point()),
            2 => Self::circle(DEFAULT_CIRCLE_NODES),
            3 => Self::product(DEFAULT_POLAR_ORDER, DEFAULT_AZIMUTH_COUNT),
            _ => Err(Error::invalid(format!(
                "sphere rules exist for n = 1, 2, 3 only (got {n})"
            ))),
        }
    }

    /// `S⁰ = {−1, +1}` with counting measure.
    pub fn two_point() -> Self {
        SphereRule {
            dim: 1,
            nodes: vec![vec![1.0], vec![-1.0]],
            weights: vec![1.0, 1.0],
            max_gap: 0.0,
        }
    }

    pub fn circle(count: usize) -> Result<Self> {
        if count < 3 {
            return Err(Error::invalid("circle rule needs at least 3 nodes"));
        }
        let step = 2.0 * PI / count as f64;
        let nodes = (0..count)
            .map(|k| {
                let a = k as f64 * step;
                vec![a.cos(), a.sin()]
            })
            .collect();
        Ok(SphereRule {
            dim: 2,
            nodes,
            weights: vec![step; count],
            max_gap: step,
        })
    }

    /// Gauss–Legendre in `cos θ` times a uniform azimuthal grid.
    pub fn product(polar_order: usize, azimuth_count: usize) -> Result<Self> {
        if polar_order < 2 || azimuth_count < 3 {
            return Err(Error::invalid("product sphere rule too small"));
        }
        let gl = GaussLegendre::new(polar_order);
        let dphi = 2.0 * PI / azimuth_count as f64;
        let mut nodes = Vec::with_capacity(polar_order * azimuth_count);
        let mut weights = Vec::with_capacity(polar_order * azimuth_count);
        for (&mu, &w) in gl.nodes().iter().zip(gl.weights()) {
            let s = (1.0 - mu * mu).sqrt();
            for k in 0..azimuth_count {
                let phi = k as f64 * dphi;
                nodes.push(vec![mu, s * phi.cos(), s * phi.sin()]);
                weights.push(w * dphi);
            }
        }
        let mut thetas: Vec<f64> = gl.nodes().iter().map(|m| m.acos()).collect();
        thetas.sort_by(f64::total_cmp);
        let mut gap = dphi.max(2.0 * thetas[0]).max(2.0 * (PI - thetas[thetas.len() - 1]));
        for pair in thetas.windows(2) {
            gap = gap.max(pair[1] - pair[0]);
        }
        Ok(SphereRule {
            dim: 3,
            nodes,
            weights,
            max_gap: gap,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Vec<f64>] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Largest angular spacing between neighbouring nodes (0 for `S⁰`).
    pub fn max_gap(&self) -> f64 {
        self.max_gap
    }

    pub fn measure(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Fails when the rule has fewer than `minimum` nodes.
    pub fn require_nodes(&self, minimum: usize) -> Result<()> {
        if self.len() < minimum {
            return Err(Error::invalid(format!(
                "sphere sample has {} nodes, at least {minimum} required",
                self.len()
            )));
        }
        Ok(())
    }
}

/// `∫_{|ω|=1} g(ω) dω` under the rule's weights.
pub fn sphere_average<G: FnMut(&[f64]) -> C64>(rule: &SphereRule, mut g: G) -> C64 {
    rule.nodes
        .iter()
        .zip(&rule.weights)
        .fold(C64::new(0.0, 0.0), |acc, (w, &wt)| acc + g(w) * wt)
}

/// Real-valued version of [`sphere_average`].
pub fn sphere_average_real<G: FnMut(&[f64]) -> f64>(rule: &SphereRule, mut g: G) -> f64 {
    rule.nodes.iter().zip(&rule.weights).map(|(w, &wt)| g(w) * wt).sum()
}

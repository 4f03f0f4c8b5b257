use crate::complex::C64;

/// Gauss–Legendre nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be positive");
        let m = order;
        let mut nodes = vec![0.0; m];
        let mut weights = vec![0.0; m];
        for i in 0..m.div_ceil(2) {
            // Tricomi initial guess, then Newton on P_m.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(m, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(m, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[m - 1 - i] = x;
            weights[i] = w;
            weights[m - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }

    /// Composite rule: `[a, b]` split into `panels` equal pieces.
    pub fn integrate_composite<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, panels: usize, mut f: F) -> f64 {
        let panels = panels.max(1);
        let width = (b - a) / panels as f64;
        (0..panels)
            .map(|k| {
                let lo = a + k as f64 * width;
                self.integrate(lo, lo + width, &mut f)
            })
            .sum()
    }
}

fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=m {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if m == 0 {
        return (1.0, 0.0);
    }
    let d = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Directed straight segment in ℂ.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Segment {
    pub start: C64,
    pub end: C64,
}

impl Segment {
    pub fn new(start: C64, end: C64) -> Self {
        Segment { start, end }
    }

    pub fn length(&self) -> f64 {
        (self.end - self.start).norm()
    }
}

/// Nodes `z` and complex weights `w` (including `dz`) such that
/// `Σ w f(z) ≈ ∫ f(z) dz` along the chain of segments, using composite
/// Gauss–Legendre panels no longer than `panel_width`.
pub fn polyline_nodes(segments: &[Segment], panel_width: f64, rule: &GaussLegendre) -> Vec<(C64, C64)> {
    let mut out = Vec::new();
    for seg in segments {
        let len = seg.length();
        if len == 0.0 {
            continue;
        }
        let panels = (len / panel_width).ceil().max(1.0) as usize;
        let dir = seg.end - seg.start;
        for k in 0..panels {
            let lo = k as f64 / panels as f64;
            let hi = (k + 1) as f64 / panels as f64;
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
                let s = mid + half * x;
                out.push((seg.start + dir * s, dir * (w * half)));
            }
        }
    }
    out
}

pub fn polyline_integral<F: FnMut(C64) -> C64>(
    segments: &[Segment],
    panel_width: f64,
    rule: &GaussLegendre,
    mut f: F,
) -> C64 {
    polyline_nodes(segments, panel_width, rule)
        .into_iter()
        .map(|(z, w)| w * f(z))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn integrates_polynomials_exactly() {
        let rule = GaussLegendre::new(6);
        // degree 11 is the exactness limit for 6 nodes
        let v = rule.integrate(0.0, 2.0, |x| x.powi(11));
        assert_abs_diff_eq!(v, 2f64.powi(12) / 12.0, epsilon = 1e-10);
        assert_abs_diff_eq!(rule.weights().iter().sum::<f64>(), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn high_order_nodes_are_sorted_and_interior() {
        let rule = GaussLegendre::new(64);
        assert!(rule.nodes().windows(2).all(|w| w[0] < w[1]));
        assert!(rule.nodes().iter().all(|x| x.abs() < 1.0));
        let v = rule.integrate(-1.0, 1.0, |x| (3.0 * x).exp());
        assert_abs_diff_eq!(v, ((3f64).exp() - (-3f64).exp()) / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn closed_square_contour_recovers_residue() {
        // ∮ dz/z = 2πi counter-clockwise around the origin
        let c = [
            C64::new(-1.0, -1.0),
            C64::new(1.0, -1.0),
            C64::new(1.0, 1.0),
            C64::new(-1.0, 1.0),
        ];
        let segs: Vec<_> = (0..4).map(|k| Segment::new(c[k], c[(k + 1) % 4])).collect();
        let v = polyline_integral(&segs, 0.1, &GaussLegendre::new(10), |z| 1.0 / z);
        assert_abs_diff_eq!(v.re, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v.im, 2.0 * std::f64::consts::PI, epsilon = 1e-12);
    }
}

use crate::complex::C64;
use crate::error::{Error, Result};

/// Decreasing sequence of `t` values used to approach `t → 0⁺`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct LadderSpec {
    ts: Vec<f64>,
    order: usize,
}

impl Default for LadderSpec {
    fn default() -> Self {
        Self::geometric(0.5, 0.5, 8, 3).expect("default ladder is valid")
    }
}

impl LadderSpec {
    /// `order` is the degree of the extrapolating polynomial in `t`.
    pub fn new(ts: Vec<f64>, order: usize) -> Result<Self> {
        if ts.len() < 3 {
            return Err(Error::invalid("a ladder needs at least 3 rungs"));
        }
        if ts.iter().any(|&t| !(t > 0.0) || !t.is_finite()) {
            return Err(Error::invalid("ladder values must be positive and finite"));
        }
        if ts.windows(2).any(|p| p[1] >= p[0]) {
            return Err(Error::invalid("ladder values must be strictly decreasing"));
        }
        if order == 0 {
            return Err(Error::invalid("extrapolation order must be at least 1"));
        }
        Ok(LadderSpec { ts, order })
    }

    pub fn geometric(t0: f64, ratio: f64, rungs: usize, order: usize) -> Result<Self> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::invalid("ladder ratio must lie in (0, 1)"));
        }
        let ts = (0..rungs).map(|k| t0 * ratio.powi(k as i32)).collect();
        Self::new(ts, order)
    }

    pub fn ts(&self) -> &[f64] {
        &self.ts
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Evaluates `f` at every rung, stopping at the first error.
    pub fn evaluate<F: FnMut(f64) -> Result<C64>>(&self, f: F) -> Result<Vec<C64>> {
        self.ts.iter().copied().map(f).collect()
    }
}

/// Extrapolated `t → 0` value.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LadderLimit {
    pub value: C64,
    /// Size of the last extrapolation correction.
    pub confidence: f64,
    /// Number of trailing rungs entering the extrapolation.
    pub rungs_used: usize,
}

/// Polynomial (Richardson/Neville) extrapolation to `t = 0` using the last
/// `order + 1` rungs; `values[k]` belongs to `ladder.ts()[k]`.
pub fn ladder_limit(values: &[C64], ladder: &LadderSpec) -> Result<LadderLimit> {
    let m = values.len();
    if m < 3 {
        return Err(Error::invalid("ladder_limit needs at least 3 evaluated rungs"));
    }
    if m > ladder.ts.len() {
        return Err(Error::invalid("more values than ladder rungs"));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Divergence("non-finite ladder value".into()));
    }
    let d1 = (values[m - 1] - values[m - 2]).norm();
    let d0 = (values[m - 2] - values[m - 3]).norm();
    let floor = 1e-12 * values[m - 1].norm().max(1.0);
    if d1 > d0 && d1 > floor {
        return Err(Error::Divergence(format!(
            "ladder corrections grow: {d0:.3e} then {d1:.3e}"
        )));
    }

    let k = (ladder.order + 1).min(m);
    let ts = &ladder.ts[m - k..m];
    let vs = &values[m - k..m];
    let full = neville_at_zero(ts, vs);
    let reduced = neville_at_zero(&ts[1..], &vs[1..]);
    Ok(LadderLimit {
        value: full,
        confidence: (full - reduced).norm(),
        rungs_used: k,
    })
}

fn neville_at_zero(ts: &[f64], vs: &[C64]) -> C64 {
    let mut p = vs.to_vec();
    let n = p.len();
    for level in 1..n {
        for i in 0..n - level {
            let (ti, tj) = (ts[i], ts[i + level]);
            p[i] = (p[i + 1] * ti - p[i] * tj) / (ti - tj);
        }
    }
    p[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn real(v: &[f64]) -> Vec<C64> {
        v.iter().map(|&x| C64::new(x, 0.0)).collect()
    }

    #[test]
    fn linear_model_is_exact() {
        let ladder = LadderSpec::geometric(0.5, 0.5, 4, 1).unwrap();
        let vals: Vec<f64> = ladder.ts().iter().map(|t| 7.0 + 3.0 * t).collect();
        let lim = ladder_limit(&real(&vals), &ladder).unwrap();
        assert_abs_diff_eq!(lim.value.re, 7.0, epsilon = 1e-13);
    }

    #[test]
    fn gaussian_heat_pairing_limit() {
        // ∫ (4πt)^{-1/2} e^{-(ξ-x)²/4t} e^{-x²} dx = (1+4t)^{-1/2} e^{-ξ²/(1+4t)}.
        let xi: f64 = 0.7;
        let ladder = LadderSpec::default();
        let vals: Vec<f64> = ladder
            .ts()
            .iter()
            .map(|t| (1.0 + 4.0 * t).powf(-0.5) * (-xi * xi / (1.0 + 4.0 * t)).exp())
            .collect();
        let lim = ladder_limit(&real(&vals), &ladder).unwrap();
        assert_abs_diff_eq!(lim.value.re, (-xi * xi).exp(), epsilon = 1e-6);
    }

    #[test]
    fn exponential_blow_up_is_divergent() {
        let ladder = LadderSpec::default();
        let vals: Vec<f64> = ladder.ts().iter().map(|t| (0.3 / t).exp()).collect();
        assert!(matches!(ladder_limit(&real(&vals), &ladder), Err(Error::Divergence(_))));
    }

    #[test]
    fn invalid_ladders() {
        assert!(LadderSpec::new(vec![0.5, 0.25], 1).is_err());
        assert!(LadderSpec::new(vec![0.5, 0.5, 0.1], 1).is_err());
        assert!(LadderSpec::new(vec![0.5, -0.1, -0.2], 1).is_err());
        let l = LadderSpec::default();
        assert!(ladder_limit(&real(&[1.0, 1.0]), &l).is_err());
    }
}

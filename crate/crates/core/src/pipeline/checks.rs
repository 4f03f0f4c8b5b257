use rayon::prelude::*;
use serde::Serialize;

use super::continued::ContinuedFunction;
use super::regularize::{Estimate, RegularizedFunction};
use crate::complex::{cosech, C64, I};
use crate::error::{Error, Result};
use crate::kernels::kernel_meromorphic_1d;
use crate::quadrature::{ladder_limit, line_integral, line_integral_par, ContourSpec, LadderLimit, LadderSpec};
use crate::uhf::{apply, ApplyOptions, TestFunction, Ultrahyperfunction};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlapReport {
    pub points_checked: usize,
    pub max_deviation: f64,
    pub argmax: C64,
    /// Sum of the two quadrature error estimates at the worst point.
    pub error_at_argmax: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Largest `|U₁ − U₂|` over the grid points lying in both domains.
pub fn overlap_report(
    u1: &RegularizedFunction,
    u2: &RegularizedFunction,
    grid: &[C64],
    tolerance: f64,
) -> Result<OverlapReport> {
    let points: Vec<C64> = grid
        .iter()
        .copied()
        .filter(|z| u1.contains(*z) && u2.contains(*z))
        .collect();
    if points.is_empty() {
        return Err(Error::invalid("no grid point lies in the overlap of the two domains"));
    }
    let rows: Vec<(C64, f64, f64)> = points
        .par_iter()
        .map(|&z| {
            let a = u1.eval(z)?;
            let b = u2.eval(z)?;
            Ok((z, (a.value - b.value).norm(), a.error_estimate + b.error_estimate))
        })
        .collect::<Result<_>>()?;
    let (argmax, max_deviation, err) =
        rows.iter()
            .copied()
            .fold((points[0], -1.0, 0.0), |acc, row| if row.1 > acc.1 { row } else { acc });
    Ok(OverlapReport {
        points_checked: points.len(),
        max_deviation,
        argmax,
        error_at_argmax: err,
        tolerance,
        passed: rows.iter().all(|row| row.1 < tolerance),
    })
}

/// Grid `[re_lo, re_hi] × [im_lo, im_hi]` with `nx × ny` points.
pub fn rectangle_grid(re: (f64, f64), im: (f64, f64), nx: usize, ny: usize) -> Vec<C64> {
    let lin = |lo: f64, hi: f64, k: usize, n: usize| {
        if n <= 1 {
            0.5 * (lo + hi)
        } else {
            lo + (hi - lo) * k as f64 / (n - 1) as f64
        }
    };
    let mut out = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            out.push(C64::new(lin(re.0, re.1, i, nx), lin(im.0, im.1, j, ny)));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointwiseRow {
    pub z: C64,
    pub value: C64,
    pub expected: C64,
    pub deviation: f64,
    pub error_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointwiseReport {
    pub rows: Vec<PointwiseRow>,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Compares `H` with a closed-form oracle at each point.
pub fn pointwise_report<G>(h: &ContinuedFunction, oracle: G, points: &[C64], tolerance: f64) -> Result<PointwiseReport>
where
    G: Fn(C64) -> C64 + Sync,
{
    let rows: Vec<PointwiseRow> = points
        .par_iter()
        .map(|&z| {
            let e = h.eval(z)?;
            let expected = oracle(z);
            Ok(PointwiseRow {
                z,
                value: e.value,
                expected,
                deviation: (e.value - expected).norm(),
                error_estimate: e.error_estimate,
            })
        })
        .collect::<Result<_>>()?;
    let max_deviation = rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
    // A NaN deviation fails the row even though `f64::max` skips it.
    let passed = rows.iter().all(|r| r.deviation < tolerance);
    Ok(PointwiseReport {
        rows,
        max_deviation,
        tolerance,
        passed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryMatchRow {
    pub phi: TestFunction,
    /// `∫ H(x + iy) φ(x + iy) dx`.
    pub paired: C64,
    /// `u(φ)`.
    pub expected: C64,
    pub deviation: f64,
    pub error_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryMatchReport {
    pub height: f64,
    pub rows: Vec<BoundaryMatchRow>,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Pairs `H` with each `φ` on `Im z = height` and compares with `u(φ)`.
pub fn boundary_match(
    h: &ContinuedFunction,
    u: &Ultrahyperfunction,
    phis: &[TestFunction],
    height: f64,
    tolerance: f64,
) -> Result<BoundaryMatchReport> {
    boundary_match_with(|z| h.eval(z), u, phis, height, tolerance)
}

/// [`boundary_match`] for an arbitrary evaluator in place of `H`.
pub fn boundary_match_with<G>(
    h: G,
    u: &Ultrahyperfunction,
    phis: &[TestFunction],
    height: f64,
    tolerance: f64,
) -> Result<BoundaryMatchReport>
where
    G: Fn(C64) -> Result<Estimate> + Sync,
{
    let mut rows = Vec::with_capacity(phis.len());
    for phi in phis {
        if phi.dim() != 1 {
            return Err(Error::invalid("boundary_match works in one variable"));
        }
        let (center, width) = phi.window();
        // H and φ are both entire along the line, so a coarse uniform rule
        // already converges far below the tolerances in use.
        let spec = ContourSpec::fitted(vec![height], 12.0 * width.max(1.0), (width / 8.0).min(0.05))?
            .with_centers(center)
            .with_tail_tolerance(1e-9);
        let q = line_integral_par(|z| Ok(h(z[0])?.value * phi.eval(z)), &spec)?;
        let expected = apply(u, phi, &ApplyOptions::default())?;
        rows.push(BoundaryMatchRow {
            phi: phi.clone(),
            paired: q.value,
            expected: expected.value,
            deviation: (q.value - expected.value).norm(),
            error_estimate: q.error_estimate() + expected.error_estimate,
        });
    }
    let max_deviation = rows.iter().map(|r| r.deviation).fold(0.0, f64::max);
    let passed = rows.iter().all(|r| r.deviation < tolerance);
    Ok(BoundaryMatchReport {
        height,
        rows,
        max_deviation,
        tolerance,
        passed,
    })
}

/// Evaluation of the reproducing sum with the literal shift `i(1 − R)ω`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShiftVariant {
    pub value: Option<C64>,
    pub residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReproducingReport {
    pub r: f64,
    pub big_r: f64,
    pub t: f64,
    /// `Σ_ω ∫ K_r(x − t + i(r − R)ω) φ(x − iRω) dx`.
    pub value: C64,
    pub expected: C64,
    pub residual: f64,
    pub error_estimate: f64,
    /// Same sum with the shift `i(1 − R)ω`; `None` where that kernel
    /// argument reaches a pole row.
    pub unit_shift_variant: ShiftVariant,
}

fn reproducing_sum(phi: &TestFunction, r: f64, big_r: f64, t: f64, shift: f64) -> Result<(C64, f64)> {
    let (center, width) = phi.window();
    let gap = r - shift.abs();
    if !(gap > 0.0) {
        return Err(Error::domain("kernel shift reaches the pole row"));
    }
    let step = 0.01f64.min(width / 8.0).min(2.0 * std::f64::consts::PI * gap / 60.0);
    let spec = ContourSpec::fitted(vec![0.0], 12.0 * width.max(1.0), step)?.with_centers(center);
    let mut total = C64::new(0.0, 0.0);
    let mut err = 0.0;
    for omega in [1.0, -1.0] {
        let mut failure = None;
        let q = line_integral(
            |x| {
                let k = kernel_meromorphic_1d(x[0] - t + I * (shift * omega), r);
                match k {
                    Ok(k) => k * phi.eval(&[x[0] - I * (big_r * omega)]),
                    Err(e) => {
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
        total += q.value;
        err += q.error_estimate();
    }
    Ok((total, err))
}

/// Residual of the reproducing identity `φ(t) = Σ_ω ∫ K_r(x − t +
/// i(r − R)ω) φ(x − iRω) dx` for `0 < R ≤ r`.
pub fn reproducing_check(phi: &TestFunction, r: f64, big_r: f64, t: f64) -> Result<ReproducingReport> {
    if phi.dim() != 1 {
        return Err(Error::invalid("reproducing_check works in one variable"));
    }
    if !(r > 0.0 && big_r > 0.0 && big_r <= r) {
        return Err(Error::invalid(format!("need 0 < R <= r, got R = {big_r}, r = {r}")));
    }
    let expected = phi.eval(&[C64::new(t, 0.0)]);
    let (value, error_estimate) = reproducing_sum(phi, r, big_r, t, r - big_r)?;
    let unit_shift_variant = match reproducing_sum(phi, r, big_r, t, 1.0 - big_r) {
        Ok((v, _)) => ShiftVariant {
            value: Some(v),
            residual: Some((v - expected).norm()),
        },
        Err(Error::Domain(_)) => ShiftVariant {
            value: None,
            residual: None,
        },
        Err(e) => return Err(e),
    };
    Ok(ReproducingReport {
        r,
        big_r,
        t,
        value,
        expected,
        residual: (value - expected).norm(),
        error_estimate,
        unit_shift_variant,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaReport {
    pub eps: Vec<f64>,
    /// `∫ [K(x + iε − i) + K(x − iε + i)] φ(x) dx`.
    pub sech_values: Vec<C64>,
    /// `∫ (i/4)[cosech(π(x + iε)/2) − cosech(π(x − iε)/2)] φ(x) dx`.
    pub cosech_values: Vec<C64>,
    pub max_form_difference: f64,
    pub expected: C64,
    pub sech_limit: LadderLimit,
    pub cosech_limit: LadderLimit,
    pub sech_residual: f64,
    pub cosech_residual: f64,
}

/// Default ε ladder `0.2·2^{−k}`, six rungs, cubic extrapolation.
pub fn default_eps_ladder() -> LadderSpec {
    LadderSpec::geometric(0.2, 0.5, 6, 3).expect("default ε ladder is valid")
}

/// Pairs both delta-sequence forms with `φ` down the ε ladder and
/// extrapolates to `ε → 0`.
pub fn delta_representation_check(phi: &TestFunction, ladder: &LadderSpec) -> Result<DeltaReport> {
    if phi.dim() != 1 {
        return Err(Error::invalid("delta_representation_check works in one variable"));
    }
    let (center, width) = phi.window();
    let lo = center[0].min(0.0) - 12.0 * width.max(1.0);
    let hi = center[0].max(0.0) + 12.0 * width.max(1.0);
    let half = std::f64::consts::FRAC_PI_2;
    let mut sech_values = Vec::new();
    let mut cosech_values = Vec::new();
    let mut max_form_difference: f64 = 0.0;
    for &eps in ladder.ts() {
        let step = 0.01f64.min(width / 8.0).min(2.0 * std::f64::consts::PI * eps / 60.0);
        let spec = ContourSpec::fitted(vec![0.0], 0.5 * (hi - lo), step)?.with_centers(vec![0.5 * (lo + hi)]);
        let ie = C64::new(0.0, eps);
        let sech = line_integral_par(
            |x| {
                let k = kernel_meromorphic_1d(x[0] + ie - I, 1.0)? + kernel_meromorphic_1d(x[0] - ie + I, 1.0)?;
                Ok(k * phi.eval(x))
            },
            &spec,
        )?;
        let cos = line_integral_par(
            |x| {
                let k = 0.25 * I * (cosech(half * (x[0] + ie)) - cosech(half * (x[0] - ie)));
                Ok(k * phi.eval(x))
            },
            &spec,
        )?;
        max_form_difference = max_form_difference.max((sech.value - cos.value).norm());
        sech_values.push(sech.value);
        cosech_values.push(cos.value);
    }
    let expected = phi.eval(&[C64::new(0.0, 0.0)]);
    let sech_limit = ladder_limit(&sech_values, ladder)?;
    let cosech_limit = ladder_limit(&cosech_values, ladder)?;
    Ok(DeltaReport {
        eps: ladder.ts().to_vec(),
        sech_residual: (sech_limit.value - expected).norm(),
        cosech_residual: (cosech_limit.value - expected).norm(),
        sech_values,
        cosech_values,
        max_form_difference,
        expected,
        sech_limit,
        cosech_limit,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CauchyRiemannReport {
    pub points_checked: usize,
    pub step: f64,
    pub max_residual: f64,
    pub argmax: C64,
}

/// Largest `|∂f/∂x + i ∂f/∂y|` by central differences with the given step.
pub fn cauchy_riemann_residual<G>(f: G, points: &[C64], step: f64) -> Result<CauchyRiemannReport>
where
    G: Fn(C64) -> Result<C64> + Sync,
{
    if points.is_empty() || !(step > 0.0) {
        return Err(Error::invalid("need sample points and a positive step"));
    }
    let residuals: Vec<(f64, C64)> = points
        .par_iter()
        .map(|&z| {
            let dx = (f(z + step)? - f(z - step)?) / (2.0 * step);
            let dy = (f(z + I * step)? - f(z - I * step)?) / (2.0 * step);
            Ok(((dx + I * dy).norm(), z))
        })
        .collect::<Result<_>>()?;
    let (max_residual, argmax) = residuals
        .iter()
        .copied()
        .fold((0.0, points[0]), |a, b| if b.0 > a.0 { b } else { a });
    Ok(CauchyRiemannReport {
        points_checked: points.len(),
        step,
        max_residual,
        argmax,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn reproducing_examples() {
        let phi = TestFunction::gaussian_1d(0.0, 1.0).unwrap();
        let a = reproducing_check(&phi, 1.0, 0.5, 0.0).unwrap();
        assert!(a.residual < 1e-6, "{a:?}");
        let b = reproducing_check(&phi, 2.0, 1.5, 0.7).unwrap();
        assert_abs_diff_eq!(b.expected.re, (-0.49f64).exp(), epsilon = 1e-15);
        assert!(b.residual < 1e-6, "{b:?}");
        let heat = TestFunction::heat_probe(vec![0.0], 1.0).unwrap();
        assert!(reproducing_check(&heat, 1.0, 0.5, 0.3).unwrap().residual < 1e-5);
        assert!(reproducing_check(&phi, 1.0, 1.5, 0.0).is_err());
    }

    #[test]
    fn delta_forms_agree_and_recover_phi_at_zero() {
        let phi = TestFunction::gaussian_1d(0.0, 1.0).unwrap();
        let d = delta_representation_check(&phi, &default_eps_ladder()).unwrap();
        assert!(d.max_form_difference < 1e-8, "{}", d.max_form_difference);
        assert!(d.sech_residual < 1e-5, "{d:?}");
        assert!(d.cosech_residual < 1e-5);
    }

    #[test]
    fn cauchy_riemann_flags_non_holomorphic_functions() {
        let pts = rectangle_grid((-1.0, 1.0), (-1.0, 1.0), 5, 5);
        let ok = cauchy_riemann_residual(|z| Ok(z.exp() * z), &pts, 1e-3).unwrap();
        assert!(ok.max_residual < 1e-5);
        let bad = cauchy_riemann_residual(|z| Ok(z.conj()), &pts, 1e-3).unwrap();
        assert_abs_diff_eq!(bad.max_residual, 2.0, epsilon = 1e-9);
    }
}

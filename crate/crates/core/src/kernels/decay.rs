use std::f64::consts::FRAC_1_SQRT_2;

use serde::Serialize;

use super::kernel::{KernelSpec, Strategy};
use crate::complex::C64;
use crate::error::{Error, Result};

/// Supremum of `|z|^p |K_r(z)|` over the sample points of one shell
/// `|Re z| = radius`, `|Im z| ≤ c`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayShell {
    pub radius: f64,
    /// Indexed by power `p = 0..=max_power`.
    pub sup: Vec<f64>,
    /// `radius^p` times the largest kernel error estimate on the shell.
    pub resolution: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RapidDecreaseReport {
    pub n: usize,
    pub r: f64,
    pub strip: f64,
    pub max_power: u32,
    /// Radius beyond which successive shells must not increase.
    pub decay_from: f64,
    pub shells: Vec<DecayShell>,
    /// Overall supremum per power, and the shell radius where it occurs.
    pub sup: Vec<f64>,
    pub argmax_radius: Vec<f64>,
    pub decays: bool,
    pub violations: Vec<String>,
}

/// Samples `|z|^p K_r(z)` on log-spaced shells of the strip `|Im z| ≤ c`
/// and checks that every power decays past `decay_from`.
///
/// A shell may exceed its predecessor only by the quadrature resolution.
pub fn rapid_decrease_certificate(spec: &KernelSpec, strip: f64, max_power: u32) -> Result<RapidDecreaseReport> {
    let r = spec.r();
    let n = spec.n();
    if !(strip >= 0.0) || strip >= r * (1.0 - spec.eps_dom()) {
        return Err(Error::invalid(format!(
            "strip half-width {strip} must lie in [0, r(1 − ε)) = [0, {})",
            r * (1.0 - spec.eps_dom())
        )));
    }
    let (outer, decay_from, count) = if n == 1 { (40.0, 10.0, 40) } else { (12.0, 4.0, 16) };
    let spec = match spec.strategy() {
        Strategy::ClosedForm1d => spec.clone(),
        Strategy::FourierQuadrature => spec.clone().with_re_extent(outer)?.with_im_extent(strip / r)?,
    };
    let inner = 0.1;
    let radii: Vec<f64> = (0..count)
        .map(|k| r * inner * (outer / inner).powf(k as f64 / (count - 1) as f64))
        .collect();

    let mut shells = Vec::with_capacity(radii.len());
    for &radius in &radii {
        let mut sup = vec![0.0f64; max_power as usize + 1];
        let mut worst_err: f64 = 0.0;
        for z in shell_points(n, radius, strip) {
            let k = spec.eval(&z)?;
            let modulus = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            let mag = k.value.norm();
            if !mag.is_finite() {
                return Err(Error::Evaluation(format!("kernel not finite at {z:?}")));
            }
            worst_err = worst_err.max(k.error_estimate);
            for (p, s) in sup.iter_mut().enumerate() {
                *s = s.max(modulus.powi(p as i32) * mag);
            }
        }
        let reach = (radius * radius + strip * strip).sqrt();
        let resolution = (0..=max_power).map(|p| reach.powi(p as i32) * worst_err).collect();
        shells.push(DecayShell {
            radius,
            sup,
            resolution,
        });
    }

    let mut violations = Vec::new();
    for pair in shells.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if a.radius < decay_from * r {
            continue;
        }
        for p in 0..=max_power as usize {
            if b.sup[p] > a.sup[p] + b.resolution[p] + a.resolution[p] {
                violations.push(format!(
                    "p = {p}: shell {:.3} has {:.3e} > {:.3e} at shell {:.3}",
                    b.radius, b.sup[p], a.sup[p], a.radius
                ));
            }
        }
    }
    let mut sup = vec![0.0; max_power as usize + 1];
    let mut argmax_radius = vec![0.0; max_power as usize + 1];
    for shell in &shells {
        for p in 0..=max_power as usize {
            if shell.sup[p] > sup[p] {
                sup[p] = shell.sup[p];
                argmax_radius[p] = shell.radius;
            }
        }
    }
    Ok(RapidDecreaseReport {
        n,
        r,
        strip,
        max_power,
        decay_from: decay_from * r,
        shells,
        sup,
        argmax_radius,
        decays: violations.is_empty(),
        violations,
    })
}

fn shell_points(n: usize, radius: f64, strip: f64) -> Vec<Vec<C64>> {
    let heights = [-1.0, -0.5, 0.0, 0.5, 1.0];
    let mut out = Vec::new();
    if n == 1 {
        for s in [-1.0, 1.0] {
            for t in heights {
                out.push(vec![C64::new(s * radius, t * strip)]);
            }
        }
        return out;
    }
    // Real directions along the axes and diagonals of the first two
    // coordinates; imaginary parts along the first axis.
    let dirs = [
        (1.0, 0.0),
        (0.0, 1.0),
        (-1.0, 0.0),
        (FRAC_1_SQRT_2, FRAC_1_SQRT_2),
    ];
    for (dx, dy) in dirs {
        for t in [-1.0, 0.0, 1.0] {
            let mut z = vec![C64::new(0.0, 0.0); n];
            z[0] = C64::new(dx * radius, t * strip);
            z[1] = C64::new(dy * radius, 0.0);
            out.push(z);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_kernel_decays_for_all_powers() {
        let spec = KernelSpec::closed_form(1.0).unwrap();
        let rep = rapid_decrease_certificate(&spec, 0.5, 4).unwrap();
        assert!(rep.decays, "{:?}", rep.violations);
        // p = 0: the supremum is near the origin, at most the value 1/4·sech(0)·|sec(π c/2)|.
        let bound = 0.25 / (std::f64::consts::PI * 0.25).cos();
        assert!(rep.sup[0] <= bound + 1e-12);
        assert!(rep.argmax_radius[4] > 1.0 && rep.argmax_radius[4] < 10.0);
    }

    #[test]
    fn strip_must_stay_inside_margin() {
        let spec = KernelSpec::closed_form(1.0).unwrap();
        assert!(rapid_decrease_certificate(&spec, 0.96, 2).is_err());
    }
}

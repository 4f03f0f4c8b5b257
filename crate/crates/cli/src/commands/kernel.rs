use anyhow::{bail, Result};
use clap::{Args, ValueEnum};
use eow_core::kernels::{kernel_table, poles_1d, KernelSpec, KernelValue};
use eow_core::C64;
use serde::Serialize;

use crate::args::{parse_point, Grid};
use crate::report::{csv_writer, fmt_c, write_json, Output, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyArg {
    Closed,
    Quadrature,
}

#[derive(Debug, Args, Serialize)]
pub struct KernelArgs {
    /// Dimension (1, 2 or 3).
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    /// Defaults to the closed form for n = 1 and quadrature otherwise.
    #[arg(long, value_enum)]
    pub strategy: Option<StrategyArg>,
    /// Quadrature tolerance override.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Quadrature step override (unscaled variable).
    #[arg(long)]
    pub step: Option<f64>,
    /// Quadrature truncation radius override (unscaled variable).
    #[arg(long)]
    pub truncation: Option<f64>,
    /// Evaluate at one point, e.g. `0.5+0.2i` or `0.1,0.2i` for n = 2.
    #[arg(long, allow_hyphen_values = true)]
    pub at: Option<String>,
    /// Tabulate on `re_lo:re_hi:step,im_lo:im_hi:step` (first coordinate; others 0).
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<Grid>,
    /// List the 2·COUNT poles nearest the real axis (n = 1).
    #[arg(long, value_name = "COUNT")]
    pub poles: Option<usize>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Serialize)]
struct SpecSummary {
    n: usize,
    r: f64,
    strategy: eow_core::kernels::Strategy,
    truncation: f64,
    step: f64,
    eps_dom: f64,
    tolerance: f64,
}

#[derive(Serialize)]
struct PointValue {
    z: Vec<C64>,
    value: C64,
    error_estimate: f64,
}

#[derive(Serialize)]
struct KernelResults {
    spec: SpecSummary,
    point: Option<PointValue>,
    poles: Option<Vec<C64>>,
    grid_points: usize,
    grid_max_error_estimate: Option<f64>,
}

fn build_spec(a: &KernelArgs) -> Result<KernelSpec> {
    let strategy = a.strategy.unwrap_or(if a.n == 1 {
        StrategyArg::Closed
    } else {
        StrategyArg::Quadrature
    });
    let mut spec = match strategy {
        StrategyArg::Closed => {
            if a.n != 1 {
                bail!("the closed form exists only for n = 1");
            }
            KernelSpec::closed_form(a.r)?
        }
        StrategyArg::Quadrature => KernelSpec::quadrature(a.n, a.r)?,
    };
    if let Some(t) = a.tol {
        spec = spec.with_tolerance(t)?;
    }
    if let Some(h) = a.step {
        spec = spec.with_step(h)?;
    }
    if let Some(x) = a.truncation {
        spec = spec.with_truncation(x)?;
    }
    Ok(spec)
}

pub fn run(a: &KernelArgs) -> Result<Status> {
    if a.at.is_none() && a.grid.is_none() && a.poles.is_none() {
        bail!("nothing to do: pass --at, --grid or --poles");
    }
    let spec = build_spec(a)?;
    let point = match &a.at {
        Some(s) => {
            let z = parse_point(s)?;
            let v = spec.eval(&z)?;
            Some(PointValue {
                z,
                value: v.value,
                error_estimate: v.error_estimate,
            })
        }
        None => None,
    };
    let poles = match a.poles {
        Some(count) => {
            if a.n != 1 {
                bail!("pole listing is available for n = 1");
            }
            Some(poles_1d(a.r, count))
        }
        None => None,
    };
    let mut grid_points = 0;
    let mut grid_max_error_estimate = None;
    if let Some(grid) = &a.grid {
        let zs = grid.points();
        let coords: Vec<Vec<C64>> = zs
            .iter()
            .map(|z| {
                let mut p = vec![C64::new(0.0, 0.0); a.n];
                p[0] = *z;
                p
            })
            .collect();
        let values = kernel_table(&spec, &coords)?;
        write_grid_csv(a, &zs, &values)?;
        grid_points = zs.len();
        grid_max_error_estimate = Some(values.iter().map(|v| v.error_estimate).fold(0.0, f64::max));
    }

    // With the grid going to standard output, keep stdout pure CSV.
    let quiet = a.grid.is_some() && a.output.csv.is_none();
    if !quiet {
        if let Some(p) = &point {
            let z: Vec<String> = p.z.iter().map(|c| fmt_c(*c)).collect();
            println!(
                "K_r({}) = {} (error estimate {:.2e})",
                z.join(", "),
                fmt_c(p.value),
                p.error_estimate
            );
        }
        if let Some(ps) = &poles {
            let list: Vec<String> = ps.iter().map(|c| fmt_c(*c)).collect();
            println!("poles: {}", list.join(", "));
        }
        if grid_points > 0 {
            println!("tabulated {grid_points} points");
        }
    }
    if let Some(path) = &a.output.json {
        let results = KernelResults {
            spec: SpecSummary {
                n: spec.n(),
                r: spec.r(),
                strategy: spec.strategy(),
                truncation: spec.truncation(),
                step: spec.step(),
                eps_dom: spec.eps_dom(),
                tolerance: spec.tolerance(),
            },
            point,
            poles,
            grid_points,
            grid_max_error_estimate,
        };
        write_json(path, "kernel", Status::Done, a, &results)?;
    }
    Ok(Status::Done)
}

fn write_grid_csv(a: &KernelArgs, zs: &[C64], values: &[KernelValue]) -> Result<()> {
    let mut w = csv_writer(a.output.csv.as_deref())?;
    w.write_record(["re_z", "im_z", "re_k", "im_k", "err_estimate"])?;
    for (z, v) in zs.iter().zip(values) {
        w.write_record([z.re, z.im, v.value.re, v.value.im, v.error_estimate].map(|x| x.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

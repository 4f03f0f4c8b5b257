use anyhow::{bail, Result};
use clap::Args;
use eow_core::fixtures::{parse_function, parse_test_function};
use eow_core::pipeline::{
    boundary_match, global_continue, overlap_report, pointwise_report, rectangle_grid, BoundaryMatchReport,
    OverlapReport, PointwiseReport, RadiusReport, RegularizeOptions,
};
use eow_core::{TestFunction, C64};
use serde::Serialize;

use crate::args::{Grid, Radius};
use crate::report::{csv_writer, fmt_c, write_json, Output, Status};

#[derive(Debug, Args, Serialize)]
pub struct GlobalArgs {
    /// Tube data: `poly:1,0,3`, `pole:w=0.5i` or `chilbert:w=0.3i`.
    #[arg(long, default_value = "poly:0,2,0,1")]
    pub f: String,
    /// Cone shift: the tubes are Im z > ℓ and Im z < −ℓ.
    #[arg(long, default_value_t = 0.5)]
    pub ell: f64,
    #[arg(long, default_value = "1.5")]
    pub r: Radius,
    /// Points where H is compared with the fixture's closed form.
    #[arg(long, allow_hyphen_values = true, default_value = "-2:2:1,-3:3:0.6")]
    pub grid: Grid,
    #[arg(long, default_value_t = 1e-5)]
    pub tol: f64,
    /// Overlap-consistency tolerance for |U₁ − U₂|.
    #[arg(long, default_value_t = 1e-6)]
    pub overlap_tol: f64,
    /// Test functions for the boundary pairing, `;`-separated; defaults to ten Gaussians.
    #[arg(long, value_delimiter = ';')]
    pub phis: Vec<String>,
    /// Contour height for the pairing; defaults to ℓ + 0.15.
    #[arg(long)]
    pub height: Option<f64>,
    #[arg(long, default_value_t = 1e-6)]
    pub match_tol: f64,
    /// Regularization contour height η; defaults to ℓ + 0.1r.
    #[arg(long)]
    pub eta: Option<f64>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Serialize)]
struct GlobalResults {
    radius: RadiusReport,
    overlap: OverlapReport,
    pointwise: PointwiseReport,
    boundary_match: BoundaryMatchReport,
}

pub fn default_gaussians() -> Vec<TestFunction> {
    (0..10)
        .map(|k| {
            let center = C64::new(-1.0 + 0.25 * k as f64, 0.1 * (k % 3) as f64);
            TestFunction::gaussian(vec![center], 0.7 + 0.1 * k as f64).expect("valid Gaussian")
        })
        .collect()
}

pub fn test_functions(tags: &[String]) -> Result<Vec<TestFunction>> {
    if tags.is_empty() {
        return Ok(default_gaussians());
    }
    Ok(tags
        .iter()
        .map(|t| parse_test_function(t))
        .collect::<eow_core::Result<_>>()?)
}

pub fn regularize_options(eta: Option<f64>) -> RegularizeOptions {
    RegularizeOptions {
        eta,
        ..RegularizeOptions::default()
    }
}

pub fn run(a: &GlobalArgs) -> Result<Status> {
    if !(a.tol > 0.0 && a.overlap_tol > 0.0 && a.match_tol > 0.0) {
        bail!("tolerances must be positive");
    }
    let fixture = parse_function(&a.f)?;
    let r = a.r.resolve(a.ell);
    let (f1, f2) = fixture.tube_pair(a.ell)?;
    let flow = global_continue(&f1, &f2, r, &regularize_options(a.eta))?;

    // Overlap strip V₁ ∩ V₂, sampled slightly inside its evaluable part.
    let half = 0.9 * (0.85 * r - a.ell);
    if !(half > 0.0) {
        bail!("r = {r} leaves no overlap between the regularized domains (need r > ℓ/0.85)");
    }
    let overlap = overlap_report(
        &flow.reg1,
        &flow.reg2,
        &rectangle_grid((-3.0, 3.0), (-half, half), 7, 3),
        a.overlap_tol,
    )?;

    let points = a.grid.points();
    let pointwise = pointwise_report(
        &flow.h,
        |z| fixture.value(z).unwrap_or(C64::new(f64::NAN, f64::NAN)),
        &points,
        a.tol,
    )?;
    let phis = test_functions(&a.phis)?;
    let bm = boundary_match(&flow.h, &flow.u1, &phis, a.height.unwrap_or(a.ell + 0.15), a.match_tol)?;

    let passed = overlap.passed && pointwise.passed && bm.passed;
    let status = Status::from_passed(passed);
    let label = |p: bool| Status::from_passed(p).label();
    println!(
        "{} overlap: max |U1 - U2| = {:.3e} at {} over {} points (tol {:.1e})",
        label(overlap.passed),
        overlap.max_deviation,
        fmt_c(overlap.argmax),
        overlap.points_checked,
        a.overlap_tol
    );
    println!(
        "{} pointwise: max |H - F| = {:.3e} over {} points (tol {:.1e})",
        label(pointwise.passed),
        pointwise.max_deviation,
        pointwise.rows.len(),
        a.tol
    );
    println!(
        "{} boundary match: max pairing gap {:.3e} over {} test functions at height {} (tol {:.1e})",
        label(bm.passed),
        bm.max_deviation,
        bm.rows.len(),
        bm.height,
        a.match_tol
    );
    println!("{}", status.label());

    if let Some(path) = &a.output.csv {
        let mut w = csv_writer(Some(path))?;
        w.write_record([
            "re_z",
            "im_z",
            "re_h",
            "im_h",
            "re_f",
            "im_f",
            "deviation",
            "err_estimate",
        ])?;
        for row in &pointwise.rows {
            w.write_record(
                [
                    row.z.re,
                    row.z.im,
                    row.value.re,
                    row.value.im,
                    row.expected.re,
                    row.expected.im,
                    row.deviation,
                    row.error_estimate,
                ]
                .map(|x| x.to_string()),
            )?;
        }
        w.flush()?;
    }
    if let Some(path) = &a.output.json {
        let results = GlobalResults {
            radius: flow.radius,
            overlap,
            pointwise,
            boundary_match: bm,
        };
        write_json(path, "global-eow", status, a, &results)?;
    }
    Ok(status)
}

use anyhow::{bail, Result};
use clap::Args;
use eow_core::fixtures::parse_test_function;
use eow_core::pipeline::{
    default_eps_ladder, delta_representation_check, reproducing_check, DeltaReport, ReproducingReport,
};
use serde::Serialize;

use crate::args::Ladder;
use crate::report::{csv_writer, write_json, Output, Status};

#[derive(Debug, Args, Serialize)]
pub struct ReproduceArgs {
    /// Test function tag, e.g. `gaussian:0,1` or `xgaussian:c=0.5,s=2`.
    #[arg(long, default_value = "gaussian:0,1")]
    pub phi: String,
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    /// Contour height R, 0 < R <= r.
    #[arg(long = "R", default_value_t = 0.5)]
    pub big_r: f64,
    /// Evaluation points, comma-separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0")]
    pub t: Vec<f64>,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Also check both delta-sequence forms at 0.
    #[arg(long)]
    pub delta: bool,
    /// ε ladder for the delta check, `eps0:ratio:rungs[:order]`.
    #[arg(long)]
    pub eps_ladder: Option<Ladder>,
    /// Tolerance for the extrapolated delta-sequence limits.
    #[arg(long, default_value_t = 1e-5)]
    pub delta_tol: f64,
    /// Allowed difference between the two delta forms before extrapolation.
    #[arg(long, default_value_t = 1e-8)]
    pub form_tol: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Serialize)]
struct Row {
    #[serde(flatten)]
    report: ReproducingReport,
    passed: bool,
}

#[derive(Serialize)]
struct DeltaRow {
    #[serde(flatten)]
    report: DeltaReport,
    passed: bool,
}

#[derive(Serialize)]
struct ReproduceResults {
    rows: Vec<Row>,
    delta: Option<DeltaRow>,
}

pub fn run(a: &ReproduceArgs) -> Result<Status> {
    if !(a.tol > 0.0) || !(a.delta_tol > 0.0) || !(a.form_tol > 0.0) {
        bail!("tolerances must be positive");
    }
    let phi = parse_test_function(&a.phi)?;
    let mut rows = Vec::new();
    for &t in &a.t {
        let report = reproducing_check(&phi, a.r, a.big_r, t)?;
        let passed = report.residual < a.tol;
        println!(
            "{} reproduce t = {t}: residual {:.3e} (tol {:.1e}, error estimate {:.1e})",
            Status::from_passed(passed).label(),
            report.residual,
            a.tol,
            report.error_estimate
        );
        rows.push(Row { report, passed });
    }
    let delta = if a.delta {
        let ladder = match &a.eps_ladder {
            Some(l) => l.spec()?,
            None => default_eps_ladder(),
        };
        let report = delta_representation_check(&phi, &ladder)?;
        let passed = report.sech_residual < a.delta_tol
            && report.cosech_residual < a.delta_tol
            && report.max_form_difference < a.form_tol;
        println!(
            "{} delta forms: sech residual {:.3e}, cosech residual {:.3e}, form difference {:.3e}",
            Status::from_passed(passed).label(),
            report.sech_residual,
            report.cosech_residual,
            report.max_form_difference
        );
        Some(DeltaRow { report, passed })
    } else {
        None
    };
    let passed = rows.iter().all(|r| r.passed) && delta.as_ref().is_none_or(|d| d.passed);
    let status = Status::from_passed(passed);
    println!("{}", status.label());

    if let Some(path) = &a.output.csv {
        let mut w = csv_writer(Some(path))?;
        w.write_record([
            "t",
            "re_value",
            "im_value",
            "re_expected",
            "im_expected",
            "residual",
            "err_estimate",
        ])?;
        for r in &rows {
            let p = &r.report;
            w.write_record(
                [
                    p.t,
                    p.value.re,
                    p.value.im,
                    p.expected.re,
                    p.expected.im,
                    p.residual,
                    p.error_estimate,
                ]
                .map(|x| x.to_string()),
            )?;
        }
        w.flush()?;
    }
    if let Some(path) = &a.output.json {
        write_json(path, "reproduce", status, a, &ReproduceResults { rows, delta })?;
    }
    Ok(status)
}

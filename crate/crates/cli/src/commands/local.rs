use anyhow::{bail, Result};
use clap::Args;
use eow_core::fixtures::{parse_carrier, parse_function};
use eow_core::pipeline::{local_continue, probe_equality, ProbeEqualityReport, ProbeOptions, RadiusReport};
use eow_core::{CarrierSet, C64};
use serde::Serialize;

use super::global::{regularize_options, test_functions};
use crate::args::{Ladder, Radius};
use crate::report::{csv_writer, fmt_c, write_json, Output, Status};

#[derive(Debug, Args, Serialize)]
pub struct LocalArgs {
    /// Data whose tube restrictions differ by point masses: `chilbert:...` or `pole:w=...`.
    #[arg(long, default_value = "chilbert:w=0.3i")]
    pub f: String,
    /// Box carrier `box:a,b,ell` containing the masses.
    #[arg(long, allow_hyphen_values = true, default_value = "box:-0.1,0.1,0.5")]
    pub carrier: String,
    #[arg(long, default_value = "1.5")]
    pub r: Radius,
    /// Probe points on the real axis outside [a − 2ℓ, b + 2ℓ].
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        default_value = "-5,-3,-2,-1.5,-1.2,1.2,1.5,2,3,5"
    )]
    pub xi: Vec<f64>,
    #[arg(long, default_value_t = 1e-5)]
    pub tol: f64,
    /// Heat-probe ladder `t0:ratio:rungs[:order]`.
    #[arg(long, default_value = "0.02:0.5:6:3")]
    pub ladder: Ladder,
    /// Gauss–Legendre panel length along the probe paths.
    #[arg(long, default_value_t = 0.02)]
    pub panel: f64,
    /// Gauss–Legendre nodes per panel.
    #[arg(long, default_value_t = 12)]
    pub nodes: usize,
    /// Half-width X of the probe paths.
    #[arg(long)]
    pub truncation: Option<f64>,
    /// Test functions for the u₁ − u₂ consistency check, `;`-separated.
    #[arg(long, value_delimiter = ';')]
    pub phis: Vec<String>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Serialize)]
struct LocalResults {
    radius: RadiusReport,
    difference: Vec<(C64, C64)>,
    difference_check: f64,
    probe: ProbeEqualityReport,
}

pub fn run(a: &LocalArgs) -> Result<Status> {
    if !(a.tol > 0.0) {
        bail!("tolerance must be positive");
    }
    let fixture = parse_function(&a.f)?;
    let carrier = parse_carrier(&a.carrier)?;
    let CarrierSet::Box1d { ell, .. } = carrier else {
        bail!("local continuation needs a box carrier");
    };
    let r = a.r.resolve(ell);
    let (f1, f2) = fixture.tube_pair(ell)?;
    let difference = fixture.boundary_difference();
    let flow = local_continue(&f1, &f2, &carrier, &difference, r, &regularize_options(a.eta))?;
    let phis = test_functions(&a.phis)?;
    let difference_check = flow.difference_check(&phis)?;

    let opts = ProbeOptions {
        ladder: a.ladder.spec()?,
        panel: a.panel,
        order: a.nodes,
        tolerance: a.tol,
        truncation: a.truncation,
    };
    let oracle = |z: C64| fixture.value(z).unwrap_or(C64::new(f64::NAN, f64::NAN));
    let probe = probe_equality(&flow, &a.xi, &opts, Some(&oracle))?;
    // Pairing of u₁ − u₂ with the masses must agree before probing means anything.
    let consistent = difference_check < a.tol;
    let status = Status::from_passed(probe.passed && consistent);

    println!(
        "{} u1 - u2 equals the point masses on {} test functions: max gap {:.3e}",
        Status::from_passed(consistent).label(),
        phis.len(),
        difference_check
    );
    for row in &probe.rows {
        println!(
            "{} xi = {}: h1 = {}, |h1 - h2| = {:.2e}, oracle deviation {:.2e}",
            Status::from_passed(row.passed).label(),
            row.xi,
            fmt_c(row.h1_limit),
            row.difference,
            row.oracle_deviation.unwrap_or(f64::NAN)
        );
    }
    println!("{}", status.label());

    if let Some(path) = &a.output.csv {
        let mut w = csv_writer(Some(path))?;
        w.write_record([
            "xi",
            "re_h1",
            "im_h1",
            "re_h2",
            "im_h2",
            "difference",
            "direct_deviation",
            "oracle_deviation",
            "passed",
        ])?;
        for row in &probe.rows {
            w.write_record([
                row.xi.to_string(),
                row.h1_limit.re.to_string(),
                row.h1_limit.im.to_string(),
                row.h2_limit.re.to_string(),
                row.h2_limit.im.to_string(),
                row.difference.to_string(),
                row.direct_deviation.to_string(),
                row.oracle_deviation.unwrap_or(f64::NAN).to_string(),
                u8::from(row.passed).to_string(),
            ])?;
        }
        w.flush()?;
    }
    if let Some(path) = &a.output.json {
        let results = LocalResults {
            radius: flow.radius,
            difference,
            difference_check,
            probe,
        };
        write_json(path, "local-eow", status, a, &results)?;
    }
    Ok(status)
}

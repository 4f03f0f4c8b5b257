use anyhow::{bail, Result};
use clap::Args;
use eow_core::fixtures::{parse_carrier, parse_point_masses};
use eow_core::uhf::{carrier_probe, ApplyOptions, CarrierProbe, Verdict};
use eow_core::Ultrahyperfunction;
use serde::Serialize;

use crate::args::Ladder;
use crate::report::{csv_writer, write_json, Output, Status};

#[derive(Debug, Args, Serialize)]
pub struct ProbeArgs {
    /// Point-mass functional, e.g. `delta:w=0.5i` or `delta:c=2,w=0.1;w=-0.3i`.
    #[arg(long, default_value = "delta:w=0.5i")]
    pub u: String,
    /// Carrier of the functional, `box:a,b,ell`.
    #[arg(long, allow_hyphen_values = true, default_value = "box:0,0,0.5")]
    pub carrier: String,
    /// Probe points, comma-separated.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        default_value = "-3,-2,-1,-0.8,-0.6,-0.4,-0.2,0,0.2,0.4,0.6,0.8,1,2,3"
    )]
    pub xi: Vec<f64>,
    /// Heat-probe ladder `t0:ratio:rungs[:order]`.
    #[arg(long, default_value = "0.5:0.5:12")]
    pub ladder: Ladder,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Serialize)]
struct Row {
    #[serde(flatten)]
    probe: CarrierProbe,
    predicted: Verdict,
    passed: bool,
}

fn verdict_label(v: Verdict) -> &'static str {
    match v {
        Verdict::Decays => "decays",
        Verdict::Grows => "grows",
        Verdict::Inconclusive => "inconclusive",
    }
}

pub fn run(a: &ProbeArgs) -> Result<Status> {
    let masses = parse_point_masses(&a.u)?;
    let carrier = parse_carrier(&a.carrier)?;
    if carrier.dim() != 1 {
        bail!("carrier-probe works with one-dimensional carriers");
    }
    for (_, w) in &masses {
        if !carrier.contains(&[*w])? {
            bail!("point mass at {w} lies outside the carrier {}", a.carrier);
        }
    }
    let u = if masses.is_empty() {
        Ultrahyperfunction::zero(1)
    } else {
        Ultrahyperfunction::point_masses_1d(&masses)?
    };
    let ladder = a.ladder.spec()?;
    let mut rows = Vec::new();
    for &xi in &a.xi {
        let probe = carrier_probe(&u, &carrier, &[xi], &ladder, &ApplyOptions::default())?;
        let predicted = probe.predicted();
        let passed = predicted != Verdict::Inconclusive && probe.verdict == predicted;
        println!(
            "{} xi = {xi}: {} (exponent max {:.4}, predicted {})",
            Status::from_passed(passed).label(),
            verdict_label(probe.verdict),
            probe.exponent_max,
            verdict_label(predicted)
        );
        rows.push(Row {
            probe,
            predicted,
            passed,
        });
    }
    let status = Status::from_passed(rows.iter().all(|r| r.passed));
    println!("{}", status.label());

    if let Some(path) = &a.output.csv {
        let mut w = csv_writer(Some(path))?;
        w.write_record(["xi", "t", "magnitude", "bound"])?;
        for row in &rows {
            for rung in &row.probe.rungs {
                w.write_record([
                    row.probe.xi[0].to_string(),
                    rung.t.to_string(),
                    rung.magnitude.map_or(String::new(), |m| m.to_string()),
                    rung.bound.to_string(),
                ])?;
            }
        }
        w.flush()?;
    }
    if let Some(path) = &a.output.json {
        write_json(path, "carrier-probe", status, a, &rows)?;
    }
    Ok(status)
}

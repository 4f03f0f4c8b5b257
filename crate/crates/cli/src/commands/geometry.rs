use std::f64::consts::SQRT_2;

use anyhow::{bail, Result};
use clap::{Args, ValueEnum};
use eow_core::fixtures::parse_carrier;
use eow_core::geometry::{
    dist_to_light_cone, region_o_membership, region_q, verify_q, CarrierSet, QVerification, RegionReport,
    DEFAULT_LIGHTCONE_SAMPLES,
};
use serde::Serialize;

use crate::args::{Radius, Range};
use crate::report::{write_json, Output, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionArg {
    O,
    Q,
}

#[derive(Debug, Args, Serialize)]
pub struct GeometryArgs {
    /// `lightcone4d`, `box`, or a full tag such as `box:-0.1,0.1,0.5`.
    #[arg(long, default_value = "lightcone4d")]
    pub carrier: String,
    #[arg(long, default_value_t = 1.0)]
    pub ell: f64,
    /// Left end of the box carrier (bare `box` tag).
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// Right end of the box carrier (bare `box` tag).
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    /// `auto` is ℓ/(√2 − 1)·(1 + 10⁻⁶).
    #[arg(long, default_value = "auto")]
    pub r: Radius,
    #[arg(long, value_enum, default_value_t = RegionArg::O)]
    pub region: RegionArg,
    /// Shrink margin for Q; defaults to 2ℓ.
    #[arg(long)]
    pub margin: Option<f64>,
    /// Distances from the carrier's real part, `lo:hi:step`.
    #[arg(long, default_value = "0:6:0.1")]
    pub scan_dist: Range,
    /// Samples per light-cone infimum.
    #[arg(long, default_value_t = DEFAULT_LIGHTCONE_SAMPLES)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Check explicit Q against sampled balls in O (slow for the light cone).
    #[arg(long)]
    pub verify_q: bool,
    #[arg(long, default_value_t = 16)]
    pub ball_samples: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Serialize)]
struct ScanRow {
    dist: f64,
    point: Vec<f64>,
    g_r: f64,
    g_r_resolution: f64,
    distance_bound: Option<f64>,
    margin: f64,
    member: bool,
}

#[derive(Serialize)]
struct GeometryResults {
    r: f64,
    ell: f64,
    region: RegionArg,
    region_descriptor: Option<eow_core::geometry::QRegion>,
    first_member_dist: Option<f64>,
    rows: Vec<ScanRow>,
    q_verification: Option<QVerification>,
}

fn carrier(a: &GeometryArgs) -> Result<CarrierSet> {
    let c = if a.carrier.contains(':') {
        parse_carrier(&a.carrier)?
    } else {
        match a.carrier.trim().to_ascii_lowercase().as_str() {
            "lightcone4d" | "lightcone" => CarrierSet::lightcone4d(a.ell)?,
            "box" | "box1d" => CarrierSet::box1d(a.a.unwrap_or(0.0), a.b.unwrap_or(0.0), a.ell)?,
            other => bail!("unknown carrier {other:?} (expected lightcone4d or box)"),
        }
    };
    Ok(c.with_sampling(a.samples, a.seed))
}

/// The scan point at distance `d` from the carrier's real part.
fn scan_point(c: &CarrierSet, d: f64) -> Vec<f64> {
    match c {
        CarrierSet::Box1d { b, .. } => vec![b + d],
        // Spacelike: (|x⃗| − x₀)/√2 = d.
        _ => vec![0.0, SQRT_2 * d, 0.0, 0.0],
    }
}

fn distance(c: &CarrierSet, x: &[f64]) -> f64 {
    match c {
        CarrierSet::Box1d { a, b, .. } => (a - x[0]).max(x[0] - b).max(0.0),
        _ => dist_to_light_cone(x),
    }
}

pub fn run(a: &GeometryArgs) -> Result<Status> {
    let c = carrier(a)?;
    if matches!(c, CarrierSet::PointCloud { .. }) {
        bail!("geometry scans support the box and light-cone carriers");
    }
    let ell = match &c {
        CarrierSet::Box1d { ell, .. } | CarrierSet::LightCone4d { ell, .. } => *ell,
        CarrierSet::PointCloud { .. } => unreachable!(),
    };
    let r = a.r.resolve(ell);
    let margin = a.margin.unwrap_or(2.0 * ell);
    let q = match a.region {
        RegionArg::Q => Some(region_q(&c, r, margin)?),
        RegionArg::O => None,
    };
    let points: Vec<Vec<f64>> = a.scan_dist.values().into_iter().map(|d| scan_point(&c, d)).collect();

    let mut rows = Vec::with_capacity(points.len());
    let report = RegionReport::scan(points.iter().cloned(), |x| {
        let g = c.g_r(x, r)?;
        let m = match &q {
            Some(q) => q.contains(x)?,
            None => region_o_membership(x, &c, r)?,
        };
        rows.push(ScanRow {
            dist: distance(&c, x),
            point: x.to_vec(),
            g_r: g.value,
            g_r_resolution: g.resolution,
            distance_bound: g.distance_bound,
            margin: m.margin,
            member: m.member,
        });
        Ok(m)
    })?;
    let first_member_dist = rows.iter().find(|row| row.member).map(|row| row.dist);

    let q_verification = match (&q, a.verify_q) {
        (Some(q), true) => Some(verify_q(q, &c, r, margin, &points, a.ball_samples)?),
        _ => None,
    };
    let status = match &q_verification {
        Some(v) => Status::from_passed(v.passed()),
        None => Status::Done,
    };

    if let Some(path) = &a.output.csv {
        report.write_csv(std::fs::File::create(path)?)?;
    } else {
        report.write_csv(std::io::stdout().lock())?;
    }
    if a.output.csv.is_some() {
        let region = if q.is_some() { "Q" } else { "O" };
        match first_member_dist {
            Some(d) => println!("region {region}: r = {r:.6}, first member at distance {d}"),
            None => println!("region {region}: r = {r:.6}, no member in the scan"),
        }
        if let Some(v) = &q_verification {
            println!(
                "{} Q inside O on {} of {} sampled balls",
                status.label(),
                v.balls_inside_o,
                v.points_checked
            );
        }
    }
    if let Some(path) = &a.output.json {
        let results = GeometryResults {
            r,
            ell,
            region: a.region,
            region_descriptor: q,
            first_member_dist,
            rows,
            q_verification,
        };
        write_json(path, "geometry", status, a, &results)?;
    }
    Ok(status)
}

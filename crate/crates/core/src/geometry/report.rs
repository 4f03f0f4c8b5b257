use std::io::Write;

use serde::Serialize;

use super::regions::Membership;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionRow {
    pub point: Vec<f64>,
    pub margin: f64,
    pub member: bool,
}

/// Sampled points of a region with their signed margins.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RegionReport {
    pub rows: Vec<RegionRow>,
}

impl RegionReport {
    pub fn push(&mut self, point: Vec<f64>, m: Membership) {
        self.rows.push(RegionRow {
            point,
            margin: m.margin,
            member: m.member,
        });
    }

    /// Evaluates `test` at every point, keeping input order.
    pub fn scan<F>(points: impl IntoIterator<Item = Vec<f64>>, mut test: F) -> Result<Self>
    where
        F: FnMut(&[f64]) -> Result<Membership>,
    {
        let mut report = RegionReport::default();
        for p in points {
            let m = test(&p)?;
            report.push(p, m);
        }
        Ok(report)
    }

    pub fn members(&self) -> usize {
        self.rows.iter().filter(|r| r.member).count()
    }

    /// CSV with columns `x1..xn, margin, member` (member as 0/1).
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let n = self.rows.first().map_or(0, |r| r.point.len());
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<String> = (1..=n).map(|k| format!("x{k}")).collect();
        header.push("margin".into());
        header.push("member".into());
        w.write_record(&header).map_err(csv_err)?;
        for row in &self.rows {
            let mut rec: Vec<String> = row.point.iter().map(|v| v.to_string()).collect();
            rec.push(row.margin.to_string());
            rec.push(if row.member { "1" } else { "0" }.into());
            w.write_record(&rec).map_err(csv_err)?;
        }
        w.flush().map_err(|e| Error::Evaluation(e.to_string()))?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Evaluation(format!("csv: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_columns_and_margin_sign() {
        let rep = RegionReport::scan(vec![vec![1.0, 2.0], vec![-1.0, 0.0]], |p| {
            Ok(Membership::from_margin(p[0]))
        })
        .unwrap();
        let mut buf = Vec::new();
        rep.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "x1,x2,margin,member\n1,2,1,1\n-1,0,-1,0\n");
        assert_eq!(rep.members(), 1);
    }
}

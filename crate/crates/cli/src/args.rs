//! Parsers for the compact flag syntaxes: ranges `lo:hi:step`, grids
//! `re_range,im_range`, ladders `t0:ratio:rungs[:order]` and radii.

use std::fmt;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use eow_core::complex::{inclusive_range, parse_complex};
use eow_core::geometry::auto_radius;
use eow_core::{LadderSpec, C64};
use serde::Serialize;

/// Inclusive range `lo:hi:step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        inclusive_range(self.lo, self.hi, self.step)
    }
}

impl FromStr for Range {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, step] = parts[..] else {
            bail!("range {s:?} must look like lo:hi:step");
        };
        let num = |v: &str| {
            v.trim()
                .parse::<f64>()
                .with_context(|| format!("{v:?} in range {s:?} is not a number"))
        };
        let range = Range {
            lo: num(lo)?,
            hi: num(hi)?,
            step: num(step)?,
        };
        if !(range.step > 0.0) || range.hi < range.lo {
            bail!("range {s:?} needs lo <= hi and step > 0");
        }
        Ok(range)
    }
}

/// Rectangular grid `re_lo:re_hi:step,im_lo:im_hi:step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub re: Range,
    pub im: Range,
}

impl Grid {
    /// Points with the imaginary part outer and the real part inner.
    pub fn points(&self) -> Vec<C64> {
        let xs = self.re.values();
        self.im
            .values()
            .into_iter()
            .flat_map(|y| xs.iter().map(move |&x| C64::new(x, y)))
            .collect()
    }
}

impl FromStr for Grid {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let (re, im) = s
            .split_once(',')
            .ok_or_else(|| anyhow!("grid {s:?} must look like re_lo:re_hi:step,im_lo:im_hi:step"))?;
        Ok(Grid {
            re: re.parse()?,
            im: im.parse()?,
        })
    }
}

/// Geometric ladder `t0:ratio:rungs` with an optional `:order`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Ladder {
    pub t0: f64,
    pub ratio: f64,
    pub rungs: usize,
    pub order: usize,
}

impl Ladder {
    pub fn spec(&self) -> Result<LadderSpec> {
        Ok(LadderSpec::geometric(self.t0, self.ratio, self.rungs, self.order)?)
    }
}

impl FromStr for Ladder {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        if !(3..=4).contains(&parts.len()) {
            bail!("ladder {s:?} must look like t0:ratio:rungs[:order]");
        }
        let t0 = parts[0].parse().with_context(|| format!("ladder {s:?}: bad t0"))?;
        let ratio = parts[1].parse().with_context(|| format!("ladder {s:?}: bad ratio"))?;
        let rungs = parts[2]
            .parse()
            .with_context(|| format!("ladder {s:?}: bad rung count"))?;
        let order = match parts.get(3) {
            Some(o) => o.parse().with_context(|| format!("ladder {s:?}: bad order"))?,
            None => 3,
        };
        Ok(Ladder {
            t0,
            ratio,
            rungs,
            order,
        })
    }
}

/// `auto` or a positive number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Radius {
    Auto,
    Value(f64),
}

impl Radius {
    pub fn resolve(&self, ell: f64) -> f64 {
        match self {
            Radius::Auto => auto_radius(ell),
            Radius::Value(r) => *r,
        }
    }
}

impl FromStr for Radius {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().eq_ignore_ascii_case("auto") {
            return Ok(Radius::Auto);
        }
        let r: f64 = s
            .trim()
            .parse()
            .with_context(|| format!("radius {s:?} is neither 'auto' nor a number"))?;
        if !(r > 0.0) {
            bail!("radius must be positive, got {r}");
        }
        Ok(Radius::Value(r))
    }
}

impl fmt::Display for Radius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Radius::Auto => write!(f, "auto"),
            Radius::Value(r) => write!(f, "{r}"),
        }
    }
}

impl Serialize for Radius {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Point of ℂⁿ written as comma-separated complex coordinates.
pub fn parse_point(s: &str) -> Result<Vec<C64>> {
    s.split(',')
        .map(|c| parse_complex(c).ok_or_else(|| anyhow!("{c:?} is not a complex number")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_ranges_and_grids() {
        let g: Grid = "-5:5:0.5,-0.9:0.9:0.3".parse().unwrap();
        assert_eq!(g.re.values().len(), 21);
        assert_eq!(g.im.values().len(), 7);
        assert_eq!(g.points().len(), 147);
        assert!("1:0:0.1".parse::<Range>().is_err());
        assert!("0:1".parse::<Range>().is_err());
    }

    #[test]
    fn parses_ladders_and_radii() {
        let l: Ladder = "0.5:0.5:12".parse().unwrap();
        assert_eq!((l.rungs, l.order), (12, 3));
        assert_eq!("0.02:0.5:6:2".parse::<Ladder>().unwrap().order, 2);
        assert_eq!("auto".parse::<Radius>().unwrap(), Radius::Auto);
        assert_eq!("1.5".parse::<Radius>().unwrap(), Radius::Value(1.5));
        assert!("-1".parse::<Radius>().is_err());
        assert!((Radius::Auto.resolve(1.0) - 2.414_216).abs() < 1e-5);
    }

    #[test]
    fn parses_points() {
        assert_eq!(
            parse_point("1+2i,0.5").unwrap(),
            vec![C64::new(1.0, 2.0), C64::new(0.5, 0.0)]
        );
        assert!(parse_point("1,x").is_err());
    }
}

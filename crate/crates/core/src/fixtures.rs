//! Named fixtures selectable by short tags, e.g. `gaussian:c=0,s=1`,
//! `poly:1,0,3`, `chilbert:w=0+0.5i`, `box:a=-0.1,b=0.1,ell=0.5`.
//!
//! A tag is `name` or `name:args`. Arguments are comma-separated, either
//! positional or `key=value`; several point masses are separated by `;`.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use crate::complex::{parse_complex, C64, I};
use crate::error::{Error, Result};
use crate::geometry::{CarrierSet, Cone};
use crate::uhf::{
    cauchy_hilbert, cauchy_hilbert_functional, cauchy_hilbert_value, BoundaryFamily, BoundaryFunction, Evaluator, Side,
    TestFunction, Ultrahyperfunction,
};

fn split_tag(tag: &str) -> (String, String) {
    match tag.trim().split_once(':') {
        Some((name, args)) => (name.trim().to_ascii_lowercase(), args.trim().to_string()),
        None => (tag.trim().to_ascii_lowercase(), String::new()),
    }
}

/// Positional and keyed arguments of one `;`-separated group.
struct Args {
    positional: Vec<String>,
    keyed: Vec<(String, String)>,
}

impl Args {
    fn parse(group: &str) -> Self {
        let mut positional = Vec::new();
        let mut keyed = Vec::new();
        for item in group.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item.split_once('=') {
                Some((k, v)) => keyed.push((k.trim().to_ascii_lowercase(), v.trim().to_string())),
                None => positional.push(item.to_string()),
            }
        }
        Args { positional, keyed }
    }

    /// Value of `key`, else the positional argument at `index`.
    fn get(&self, key: &str, index: usize) -> Option<&str> {
        self.keyed
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .or_else(|| self.positional.get(index).map(String::as_str))
    }

    fn real(&self, tag: &str, key: &str, index: usize, default: Option<f64>) -> Result<f64> {
        match self.get(key, index) {
            Some(v) => v
                .parse()
                .map_err(|_| bad(tag, &format!("{key} = {v:?} is not a real number"))),
            None => default.ok_or_else(|| bad(tag, &format!("missing {key}"))),
        }
    }

    fn complex(&self, tag: &str, key: &str, index: usize, default: Option<C64>) -> Result<C64> {
        match self.get(key, index) {
            Some(v) => parse_complex(v).ok_or_else(|| bad(tag, &format!("{key} = {v:?} is not a complex number"))),
            None => default.ok_or_else(|| bad(tag, &format!("missing {key}"))),
        }
    }
}

fn bad(tag: &str, msg: &str) -> Error {
    Error::InvalidArgument(format!("fixture {tag:?}: {msg}"))
}

/// Parses `gaussian:c,s`, `xgaussian:c,s` (`z·gaussian`), `heat:xi,t`.
pub fn parse_test_function(tag: &str) -> Result<TestFunction> {
    let (name, args) = split_tag(tag);
    let a = Args::parse(&args);
    match name.as_str() {
        "gaussian" | "gauss" => {
            let c = a.complex(tag, "c", 0, Some(C64::new(0.0, 0.0)))?;
            TestFunction::gaussian(vec![c], a.real(tag, "s", 1, Some(1.0))?)
        }
        "xgaussian" => {
            let c = a.complex(tag, "c", 0, Some(C64::new(0.0, 0.0)))?;
            let s = a.real(tag, "s", 1, Some(1.0))?;
            // z·exp(−((z − c)/s)²) written around the centre: (c + u)·gaussian.
            TestFunction::poly_gaussian(vec![c, C64::new(1.0, 0.0)], vec![c], s)
        }
        "heat" => TestFunction::heat_probe(vec![a.real(tag, "xi", 0, None)?], a.real(tag, "t", 1, None)?),
        _ => Err(bad(
            tag,
            "unknown test-function tag (expected gaussian, xgaussian or heat)",
        )),
    }
}

/// Holomorphic data on the two tubes, as used by the continuation flows.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionFixture {
    /// `Σ a_k z^k` (ascending coefficients).
    Poly { coeffs: Vec<C64> },
    /// `1/(z − w)`, whose tube restrictions differ by a point mass.
    Pole { w: C64 },
    /// `(2πi)^{−1} Σ c_k/(w_k − z)`.
    CauchyHilbert { masses: Vec<(C64, C64)> },
}

/// Parses `poly:1,0,3`, `pole:w=0.5i`, `chilbert:w=0.3i` or
/// `chilbert:c=1,w=0.3i;c=2,w=-0.3i`.
pub fn parse_function(tag: &str) -> Result<FunctionFixture> {
    let (name, args) = split_tag(tag);
    match name.as_str() {
        "poly" => {
            let coeffs = Args::parse(&args)
                .positional
                .iter()
                .map(|s| parse_complex(s).ok_or_else(|| bad(tag, &format!("coefficient {s:?} is not a number"))))
                .collect::<Result<Vec<_>>>()?;
            if coeffs.is_empty() {
                return Err(bad(tag, "poly needs at least one coefficient"));
            }
            Ok(FunctionFixture::Poly { coeffs })
        }
        "pole" => Ok(FunctionFixture::Pole {
            w: Args::parse(&args).complex(tag, "w", 0, None)?,
        }),
        "chilbert" => Ok(FunctionFixture::CauchyHilbert {
            masses: parse_masses(tag, &args)?,
        }),
        _ => Err(bad(tag, "unknown function tag (expected poly, pole or chilbert)")),
    }
}

fn parse_masses(tag: &str, args: &str) -> Result<Vec<(C64, C64)>> {
    let mut masses = Vec::new();
    for group in args.split(';').map(str::trim).filter(|g| !g.is_empty()) {
        let a = Args::parse(group);
        let (c, w) = if a.keyed.iter().any(|(k, _)| k == "w") {
            (
                a.complex(tag, "c", usize::MAX, Some(C64::new(1.0, 0.0)))?,
                a.complex(tag, "w", usize::MAX, None)?,
            )
        } else if a.positional.len() == 2 {
            (a.complex(tag, "c", 0, None)?, a.complex(tag, "w", 1, None)?)
        } else {
            (C64::new(1.0, 0.0), a.complex(tag, "w", 0, None)?)
        };
        masses.push((c, w));
    }
    if masses.is_empty() {
        return Err(bad(tag, "need at least one point mass"));
    }
    Ok(masses)
}

/// Parses point-mass functionals: `delta:w=0.5i`, `delta:c=2,w=0.1;w=0.3i`,
/// or `zero`.
pub fn parse_point_masses(tag: &str) -> Result<Vec<(C64, C64)>> {
    let (name, args) = split_tag(tag);
    match name.as_str() {
        "delta" => parse_masses(tag, &args),
        "zero" => Ok(Vec::new()),
        _ => Err(bad(tag, "unknown functional tag (expected delta or zero)")),
    }
}

/// Parses `box:a,b,ell` and `lightcone4d:ell`.
pub fn parse_carrier(tag: &str) -> Result<CarrierSet> {
    let (name, args) = split_tag(tag);
    let a = Args::parse(&args);
    match name.as_str() {
        "box" | "box1d" => CarrierSet::box1d(
            a.real(tag, "a", 0, None)?,
            a.real(tag, "b", 1, None)?,
            a.real(tag, "ell", 2, None)?,
        ),
        "lightcone4d" | "lightcone" => CarrierSet::lightcone4d(a.real(tag, "ell", 0, Some(1.0))?),
        _ => Err(bad(tag, "unknown carrier tag (expected box or lightcone4d)")),
    }
}

impl FunctionFixture {
    /// Closed-form value, where the fixture is defined.
    pub fn value(&self, z: C64) -> Result<C64> {
        match self {
            FunctionFixture::Poly { coeffs } => Ok(coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, k| acc * z + k)),
            FunctionFixture::Pole { w } => {
                if (z - w).norm() < 1e-12 {
                    return Err(Error::Pole(format!("{z}")));
                }
                Ok(1.0 / (z - w))
            }
            FunctionFixture::CauchyHilbert { masses } => cauchy_hilbert_value(masses, z),
        }
    }

    /// Smallest `ℓ` keeping every singular point strictly inside `|Im z| < ℓ`.
    pub fn min_ell(&self) -> f64 {
        match self {
            FunctionFixture::Poly { .. } => 0.0,
            FunctionFixture::Pole { w } => w.im.abs(),
            FunctionFixture::CauchyHilbert { masses } => masses.iter().map(|(_, w)| w.im.abs()).fold(0.0, f64::max),
        }
    }

    /// Restrictions to `Im z > ℓ` and `Im z < −ℓ`.
    pub fn tube_pair(&self, ell: f64) -> Result<(BoundaryFunction, BoundaryFunction)> {
        match self {
            FunctionFixture::Poly { coeffs } => Ok((
                BoundaryFunction::polynomial(coeffs.clone(), Side::Upper, ell)?,
                BoundaryFunction::polynomial(coeffs.clone(), Side::Lower, ell)?,
            )),
            FunctionFixture::Pole { w } => {
                let w = *w;
                if !(w.im.abs() < ell) {
                    return Err(Error::invalid(format!("pole {w} must satisfy |Im w| < ℓ = {ell}")));
                }
                let make = |side| {
                    let eval: Evaluator = Arc::new(move |z: &[C64]| {
                        if (z[0] - w).norm() < 1e-12 {
                            return Err(Error::Pole(format!("{}", z[0])));
                        }
                        Ok(1.0 / (z[0] - w))
                    });
                    BoundaryFunction::new(
                        eval,
                        side,
                        Cone::forward(1)?.with_shift(ell)?,
                        0,
                        BoundaryFamily::Rational { poles: vec![w] },
                        vec![w],
                    )
                };
                Ok((make(Side::Upper)?, make(Side::Lower)?))
            }
            FunctionFixture::CauchyHilbert { masses } => cauchy_hilbert(masses, ell),
        }
    }

    /// `u₁ − u₂` as point masses: empty for entire data, `−2πi δ_w` for a
    /// simple pole, the masses themselves for a Cauchy–Hilbert transform.
    pub fn boundary_difference(&self) -> Vec<(C64, C64)> {
        match self {
            FunctionFixture::Poly { .. } => Vec::new(),
            FunctionFixture::Pole { w } => vec![(-2.0 * PI * I, *w)],
            FunctionFixture::CauchyHilbert { masses } => masses.clone(),
        }
    }

    /// Two-tube functional `∫_{Im z = η} F₊φ − ∫_{Im z = −η} F₋φ`.
    pub fn difference_functional(&self, ell: f64) -> Result<Ultrahyperfunction> {
        match self {
            FunctionFixture::CauchyHilbert { masses } => cauchy_hilbert_functional(masses, ell),
            _ => {
                let (up, low) = self.tube_pair(ell)?;
                Ultrahyperfunction::combination(vec![
                    (C64::new(1.0, 0.0), Ultrahyperfunction::boundary(up, None)?),
                    (C64::new(-1.0, 0.0), Ultrahyperfunction::boundary(low, None)?),
                ])
            }
        }
    }
}

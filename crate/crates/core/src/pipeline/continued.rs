use serde::Serialize;

use super::regularize::{Estimate, RegularizedFunction};
use crate::complex::{C64, I};
use crate::error::{Error, Result};

/// Which piece of a glued function produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Primary,
    Fallback,
}

/// `U′ = U_primary` on its domain, else the fallback (e.g. `U₂ + U₁₂` on
/// `V₂ ∩ Z`).
#[derive(Debug, Clone)]
pub struct GluedFunction {
    primary: RegularizedFunction,
    fallback: Option<RegularizedFunction>,
    labels: (String, String),
}

/// Glues `primary` and `fallback` by preference-ordered dispatch.
pub fn glue(
    primary: RegularizedFunction,
    fallback: Option<RegularizedFunction>,
    labels: (&str, &str),
) -> Result<GluedFunction> {
    if let Some(fb) = &fallback {
        if fb.r() != primary.r() {
            return Err(Error::invalid("glued regularizations must share r"));
        }
    }
    Ok(GluedFunction {
        primary,
        fallback,
        labels: (labels.0.to_string(), labels.1.to_string()),
    })
}

impl GluedFunction {
    pub fn r(&self) -> f64 {
        self.primary.r()
    }

    pub fn primary(&self) -> &RegularizedFunction {
        &self.primary
    }

    pub fn fallback(&self) -> Option<&RegularizedFunction> {
        self.fallback.as_ref()
    }

    pub fn branch(&self, z: C64) -> Option<Branch> {
        if self.primary.contains(z) {
            Some(Branch::Primary)
        } else if self.fallback.as_ref().is_some_and(|f| f.contains(z)) {
            Some(Branch::Fallback)
        } else {
            None
        }
    }

    pub fn contains(&self, z: C64) -> bool {
        self.branch(z).is_some()
    }

    pub fn eval(&self, z: C64) -> Result<Estimate> {
        match self.branch(z) {
            Some(Branch::Primary) => self.primary.eval(z),
            Some(Branch::Fallback) => self.fallback.as_ref().expect("fallback branch").eval(z),
            None => Err(Error::domain(format!(
                "{z} is outside both {} ({}) and {}",
                self.labels.0,
                self.primary.domain().label(),
                self.labels.1
            ))),
        }
    }

    /// Names of the glued pieces.
    pub fn provenance(&self) -> Vec<String> {
        let mut out = vec![self.labels.0.clone()];
        if self.fallback.is_some() {
            out.push(self.labels.1.clone());
        }
        out
    }
}

/// `H(z) = Σ_{ω=±1} U′(z + irω)`.
#[derive(Debug, Clone)]
pub struct ContinuedFunction {
    glued: GluedFunction,
    r: f64,
}

pub fn reconstruct(glued: GluedFunction) -> ContinuedFunction {
    let r = glued.r();
    ContinuedFunction { glued, r }
}

impl ContinuedFunction {
    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn glued(&self) -> &GluedFunction {
        &self.glued
    }

    pub fn provenance(&self) -> Vec<String> {
        self.glued.provenance()
    }

    /// True when both shifted points lie in the glued domain.
    pub fn contains(&self, z: C64) -> bool {
        [1.0, -1.0].iter().all(|w| self.glued.contains(z + I * (self.r * w)))
    }

    pub fn eval(&self, z: C64) -> Result<Estimate> {
        let mut value = C64::new(0.0, 0.0);
        let mut err = 0.0;
        for omega in [1.0, -1.0] {
            let shifted = z + I * (self.r * omega);
            let e = self.glued.eval(shifted).map_err(|e| match e {
                Error::Domain(msg) => Error::domain(format!("H({z}), ω = {omega:+}: {msg}")),
                other => other,
            })?;
            value += e.value;
            err += e.error_estimate;
        }
        Ok(Estimate {
            value,
            error_estimate: err,
        })
    }
}

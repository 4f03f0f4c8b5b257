//! Edge-of-the-wedge continuation in one variable: regularization
//! `U = u ∗ K_r`, gluing over overlapping domains, reconstruction
//! `H(z) = Σ_{ω=±1} U(z + irω)`, and the checks that certify each step
//! (overlap agreement, boundary pairing, reproducing and delta identities,
//! Cauchy–Riemann residuals, heat-probe equality along the probe paths).

mod checks;
mod continued;
mod flows;
mod regularize;

pub use checks::{
    boundary_match, boundary_match_with, cauchy_riemann_residual, default_eps_ladder, delta_representation_check,
    overlap_report, pointwise_report, rectangle_grid, reproducing_check, BoundaryMatchReport, BoundaryMatchRow,
    CauchyRiemannReport, DeltaReport, OverlapReport, PointwiseReport, PointwiseRow, ReproducingReport, ShiftVariant,
};
pub use continued::{glue, reconstruct, Branch, ContinuedFunction, GluedFunction};
pub use flows::{
    global_continue, local_continue, probe_equality, GlobalFlow, LocalFlow, ProbeEqualityReport, ProbeOptions,
    ProbePath, ProbeRow, RadiusReport,
};
pub use regularize::{regularize, DomainTag, Estimate, RegularizeOptions, RegularizedFunction, DEFAULT_KERNEL_MARGIN};

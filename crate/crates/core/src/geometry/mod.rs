//! Cones, carriers and the tube-domain regions that govern where
//! continuation succeeds: `g_r`, `O`, `Q`, `V₁`, `V₂`, `Z`, `W_{r,δ}`.

mod carrier;
mod cone;
mod regions;
mod report;

pub use carrier::{g_r, CarrierSet, GrEstimate, DEFAULT_LIGHTCONE_SAMPLES};
pub use cone::{dist_to_cone, dist_to_light_cone, project_light_cone, Cone};
pub use regions::{
    auto_radius, convex_hull_membership, imaginary_inclusion_check, region_o_membership, region_q, tube_membership,
    verify_q, w_r_delta_and_gamma_tilde, HullWitness, InclusionCheck, Membership, QRegion, QVerification, SurfaceS1,
    Tube, TubeParams, WRegion, WReport,
};
pub use report::{RegionReport, RegionRow};

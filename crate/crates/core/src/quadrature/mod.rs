//! Shared numerical integration.
//!
//! Everything here works on uniform or Gauss–Legendre grids: horizontal
//! product contours in ℂⁿ ([`line_integral`]), straight-segment chains in ℂ
//! ([`polyline_integral`]), averages over the unit sphere
//! ([`sphere_average`]) and `t → 0⁺` limit extrapolation ([`ladder_limit`]).

mod contour;
mod gauss;
mod ladder;
mod sphere;

pub use contour::{line_integral, line_integral_par, trapezoid, ContourSpec, Integral};
pub use gauss::{polyline_integral, polyline_nodes, GaussLegendre, Segment};
pub use ladder::{ladder_limit, LadderLimit, LadderSpec};
pub use sphere::{sphere_average, sphere_average_real, SphereRule};

//! Test functions on tubes, boundary functions with growth certificates,
//! ultrahyperfunctions as contour functionals, the Cauchy–Hilbert transform
//! of point masses and heat-probe carrier tests.
//!
//! Contours run left to right in every coordinate; the sign convention is
//! pinned by the Cauchy–Hilbert round trip `−∮_C F φ dz = f(φ)`.

mod boundary;
mod cauchy;
mod functional;
mod probe;
mod test_function;

pub use boundary::{BoundaryFamily, BoundaryFunction, Evaluator, GrowthCertificate, Side};
pub use cauchy::{
    cauchy_hilbert, cauchy_hilbert_functional, cauchy_hilbert_value, cauchy_round_trip, Rectangle, RoundTrip,
};
pub use functional::{apply, default_window, Applied, ApplyOptions, Ultrahyperfunction};
pub use probe::{
    carrier_probe, default_probe_ladder, growth_order, heat_probe, CarrierProbe, ProbeRung, Verdict, PROBE_FLOOR,
};
pub use test_function::{TestFamily, TestFunction};

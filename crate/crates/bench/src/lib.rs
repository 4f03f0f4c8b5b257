//! Shared fixtures for the benchmarks.

use eow_core::geometry::CarrierSet;
use eow_core::pipeline::{global_continue, local_continue, GlobalFlow, LocalFlow, RegularizeOptions};
use eow_core::uhf::{cauchy_hilbert, Side};
use eow_core::{BoundaryFunction, C64};

/// `n = 1` grid `|Re z| ≤ 10`, `|Im z| ≤ 0.9`, step 0.25.
pub fn kernel_grid_1d() -> Vec<Vec<C64>> {
    let mut out = Vec::new();
    for j in 0..=7 {
        let y = -0.9 + 0.25 * j as f64;
        for k in 0..=80 {
            out.push(vec![C64::new(-10.0 + 0.25 * k as f64, y)]);
        }
    }
    out
}

/// Global flow for `z³ + 2z` with `ℓ = 0.5`, `r = 1.5`.
pub fn cubic_flow() -> GlobalFlow {
    let coeffs = vec![
        C64::new(0.0, 0.0),
        C64::new(2.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(1.0, 0.0),
    ];
    let f1 = BoundaryFunction::polynomial(coeffs.clone(), Side::Upper, 0.5).expect("valid polynomial");
    let f2 = BoundaryFunction::polynomial(coeffs, Side::Lower, 0.5).expect("valid polynomial");
    global_continue(&f1, &f2, 1.5, &RegularizeOptions::default()).expect("global flow")
}

/// Local flow for `δ_{0.3i}` on the box `[−0.1, 0.1] + i[−0.5, 0.5]`.
pub fn delta_flow() -> LocalFlow {
    let masses = vec![(C64::new(1.0, 0.0), C64::new(0.0, 0.3))];
    let (f1, f2) = cauchy_hilbert(&masses, 0.5).expect("transform");
    let carrier = CarrierSet::box1d(-0.1, 0.1, 0.5).expect("carrier");
    local_continue(&f1, &f2, &carrier, &masses, 1.5, &RegularizeOptions::default()).expect("local flow")
}

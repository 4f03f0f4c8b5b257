//! Numerical edge-of-the-wedge machinery for tempered ultrahyperfunctions.
//!
//! The crate is organised by stage: [`geometry`] (cones, carriers, the
//! regions `O`, `Q`, `W`), [`kernels`] (the sphere-Laplace kernel `K_r`),
//! [`quadrature`] (contour, sphere and ladder rules), [`uhf`] (test
//! functions, boundary functions, functionals), [`pipeline`] (the
//! continuation flows and their checks) and [`fixtures`] (tagged inputs).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod complex;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod kernels;
pub mod pipeline;
pub mod quadrature;
pub mod uhf;

pub use complex::{ComplexGrid, ComplexPoint, C64};
pub use error::{Error, Result};
pub use geometry::{CarrierSet, Cone};
pub use kernels::{KernelSpec, KernelValue};
pub use pipeline::{ContinuedFunction, Estimate, ProbePath, RegularizedFunction};
pub use quadrature::{ContourSpec, LadderSpec};
pub use uhf::{BoundaryFunction, TestFunction, Ultrahyperfunction};

//! The kernel `K(z) = (2π)^{−n} ∫ e^{i⟨z, ξ⟩} / I(ξ) dξ` with
//! `I(ξ) = ∫_{|ω|=1} e^{−⟨ω, ξ⟩} dω`, its scaled form `K_r`, and decay checks.
//!
//! For n = 1 the kernel is `(1/4) sech(πz/2)`, with poles at `i(1 + 2m)`.

mod decay;
mod kernel;
mod laplace;

pub use decay::{rapid_decrease_certificate, DecayShell, RapidDecreaseReport};
pub use kernel::{
    kernel_eval, kernel_meromorphic_1d, kernel_scaled, kernel_table, poles_1d, unit_kernel_1d, KernelSpec, KernelValue,
    Strategy, DEFAULT_EPS_DOM,
};
pub use laplace::{sphere_laplace, sphere_laplace_on_rule, sphere_laplace_scaled, sphere_measure};

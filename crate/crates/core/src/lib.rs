//! Discrete Mehler-Fock transforms.
//!
//! The crate evaluates the conical Legendre functions `P^μ_{iτ−1/2}(x)`,
//! `x > 1`, by three independent integral representations, together with the
//! incomplete Legendre integral `P^μ_{in−1/2}(x, ω)` truncated at `ω`, the
//! modified Bessel function `K_{iτ}(y)` and the incomplete Bessel integral
//! `K_{in}(y, π)`. On top of these kernels sit the discrete transform pair
//!
//! ```text
//! F(x) = Σ_{m≥1} a_m P^μ_{im−1/2}(x)
//! a_n  = (n/π) sinh(πn) Γ(1/2+in−μ) Γ(1/2−in−μ) ∫_1^∞ P^μ_{in−1/2}(x, π) F(x) dx
//! ```
//!
//! its dual, the function expansions built from them, and an [`oracle`]
//! module that checks every closed-form identity the transforms rest on.
//!
//! The crate is `no_std` and only needs `alloc`. Every operation is a pure
//! function of its arguments, so callers are free to fan work out across
//! threads.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod error;
pub mod oracle;
pub mod quadrature;
pub mod specfun;
pub mod transform;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use quadrature::{DecayHint, Endpoint, IntegralResult, QuadratureConfig};
pub use specfun::{KernelDegree, MellinBarnesConfig, MuParameter, Regime};
pub use transform::{CoefficientSequence, FunctionSpec, KernelRoute, TransformConfig};

//! Solver and verification toolkit for semilinear subdiffusion
//!
//! ```text
//! ∂ᵅu = (D(x,t) u_x)_x + f(x,t,u)   on (0,1) × (0,T],   u(0,t) = u(1,t) = 0,
//! ```
//!
//! with a Caputo time derivative of order `0 < α < 1`. Space is discretised by
//! P1 finite elements, time by the L1 scheme with the nonlinearity evaluated
//! at a linearly extrapolated state. Around the solver sit the pieces needed
//! to study its error: fractional-calculus kernels, projections and norms,
//! sine-expansion smoothness estimates, the benchmark problem registry and
//! the convergence/time-error study drivers.

#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::excessive_precision,
    clippy::needless_range_loop
)]

pub mod error;
pub mod fem1d;
pub mod fraccalc;
pub mod harness;
pub mod problems;
pub mod quadrature;
pub mod selftest;
pub mod special;
pub mod spectral;
pub mod timestepper;

pub use error::{Error, Result};
pub use fraccalc::FracOrder;

// Book chapters are compiled as doctests so their snippets stay runnable.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fractional-calculus.md")]
    mod fractional_calculus {}
    #[doc = include_str!("../../../book/src/mittag-leffler.md")]
    mod mittag_leffler {}
    #[doc = include_str!("../../../book/src/finite-elements.md")]
    mod finite_elements {}
    #[doc = include_str!("../../../book/src/smoothness.md")]
    mod smoothness {}
    #[doc = include_str!("../../../book/src/time-stepping.md")]
    mod time_stepping {}
    #[doc = include_str!("../../../book/src/studies.md")]
    mod studies {}
}

//! Numerical toolkit for the two-dimensional singular distribution
//!
//! ```text
//! K_a(xi1, xi2) = a / (2 pi^2) * 1 / (xi1^2 - a^2 xi2^2)
//! ```
//!
//! that governs conical points in the theory of elliptic pseudo-differential
//! equations. The crate computes exact pairings `(K_a, phi)` by quadrature,
//! the closed forms of the truncated integrals `T_{k,N}`, the rough and sharp
//! expansions of `K_a` in powers of `1/a`, convergence-order fits, and the
//! Fourier-side solution formula for model equations in a cone.
//!
//! The crate is `no_std` and needs only `alloc`. File formats, the CLI and
//! parallel sweeps live in the companion `kasym` crate.
#![no_std]
#![warn(missing_debug_implementations)]
#![cfg_attr(test, allow(clippy::excessive_precision))]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod converge;
mod error;
pub mod kernel;
pub mod math;
pub mod pairing;
pub mod quad;
#[cfg(feature = "serde")]
pub mod serde_complex;
pub mod testfn;
pub mod wavesolve;

pub use error::{Error, Result};
pub use num_complex::Complex64;

//! Computational core for an iterative attack on Waring's problem.
//!
//! Everything here is pure and allocation-only (`no_std` + `alloc`):
//!
//! - [`bound_engine`]: the exponent recursions for `S_s(P) = P^{λ_s}`, the
//!   `Δ(s)` iteration under a θ-schedule, and the resulting `G(k)` bounds.
//! - [`sieve`] and [`smooth_sets`]: prime windows and the recursive product
//!   sets `ℰ(P)`.
//! - [`aux_count`]: exact representation functions `γ(m)`, the auxiliary
//!   count `S_s = Σ γ(m)²`, and `T_{p,q}`.
//! - [`expsum_arcs`]: exponential sums, major/minor arc dissections, exact
//!   grid moments and arc quadrature.
//! - [`differences`]: integer polynomials, forward and modified differences,
//!   `Ψ_i`, `F_i` and the balancing terms `U_i`, `V_i`.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod aux_count;
pub mod bound_engine;
pub mod differences;
mod error;
pub mod expsum_arcs;
pub mod phase;
pub mod sieve;
pub mod smooth_sets;
mod stats;

pub use error::{Error, Result};
pub use stats::{ols, LinearFit};

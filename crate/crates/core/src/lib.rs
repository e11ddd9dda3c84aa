//! Passivity analysis for linear time-invariant systems.
//!
//! A system is given either as a square polynomial pair (P, Q) whose
//! behavior is `P(d/dt) i = Q(d/dt) v`, or as a state-space model
//! `(A, B, C, D)`. The crate decides passivity exactly where it can,
//! returns witnesses of failure, and builds storage-function certificates
//! `(X, L, W)` for passive systems, including uncontrollable ones.
//!
//! Runnable tours of each capability live in `examples/`:
//!
//! - `cargo run --example exact_polynomials`
//! - `cargo run --example polynomial_matrices`
//! - `cargo run --example positive_real_pair`
//! - `cargo run --example decomposition`
//! - `cargo run --example partition`
//! - `cargo run --example realization`
//! - `cargo run --example energy_extraction`
//! - `cargo run --example certificate`
//! - `cargo run --example spectral_factor`

// Comparisons written as !(a <= b) also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod behavior;
pub mod certificate;
pub mod cli;
pub mod error;
pub mod exactalg;
pub mod numkernel;
pub mod polymat;
pub mod statespace;
pub mod prpair;

pub use error::{Error, Result};

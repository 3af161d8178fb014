//! Error-mitigated sampling for small noisy circuits.
//!
//! The crate is `no_std` (it needs `alloc`) and is organised bottom-up:
//!
//! - [`quantum`]: dense states, gates, Kraus channels, Pauli transfer matrices.
//! - [`circuit`]: circuits, noise models, QPE builders, exact simulation and shot sampling.
//! - [`mitigation`]: probabilistic error cancellation plans, signed response
//!   sampling, post-selection and the exact response-rate oracle.
//! - [`estimator`]: signed histograms, distribution estimators and error metrics.
//! - [`decision`]: thresholds, smallest-string extraction and ground-state observables.
//!
//! Conventions used throughout:
//!
//! - Qubit 0 is the most significant bit of every basis index and of every
//!   measured bitstring. The "smallest string" is the smallest unsigned value.
//! - A depolarizing channel of strength `p` on `k` qubits is
//!   `(1 - p) ρ + p / (4^k - 1) Σ_{P ≠ I} P ρ P`, i.e. `p` is the probability
//!   of a non-identity Pauli fault.

#![no_std]
// `!(x >= 0.0)` style checks are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bitstring;
pub mod circuit;
pub mod decision;
pub mod estimator;
pub mod mitigation;
pub mod quantum;

mod error;

pub use bitstring::Bitstring;
pub use error::{Error, Result};

/// Tolerance for exactness checks (unitarity, trace, Hermiticity).
pub const EXACT_TOL: f64 = 1e-10;

/// Slack allowed on eigenvalues when checking positivity.
pub const POSITIVITY_TOL: f64 = 1e-9;

//! Sparse multi-index polynomials over a finite Fourier lattice.
//!
//! A monomial `u^l ubar^k` is keyed by a [`MultiIndexPair`]; a [`Polynomial`]
//! maps keys to [`Coefficient`]s which may carry a ledger (theta = 0) or a
//! factored part (theta = 1) alongside the scalar value.

pub mod coefficient;
pub mod error;
pub mod freq;
pub mod io;
pub mod lattice;
pub mod mono;
pub mod polynomial;
pub mod semibound;
pub mod state;
pub mod truncation;

pub use coefficient::{Coefficient, LedgerEntry};
pub use error::{PolyError, Result};
pub use freq::FrequencyVector;
pub use lattice::{bracket_i, bracket_j, LatticeConfig};
pub use mono::{MultiIndexPair, SparseExp};
pub use num_complex::Complex64;
pub use polynomial::Polynomial;
pub use semibound::{semi_bound_check, SemiBoundReport};
pub use state::State;
pub use truncation::{gamma_gt2, gamma_le2, in_gamma_le2};

/// `M(l,k)` of a multi-index pair.
pub fn momentum(mi: &MultiIndexPair) -> i64 {
    mi.momentum()
}

/// `||u||_p^2`.
pub fn sobolev_norm_sq(s: &State, p: f64) -> f64 {
    s.sobolev_norm_sq(p)
}

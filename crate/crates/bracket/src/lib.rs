//! Poisson brackets under the forms `w_0` and `w_1`, Hamiltonian vector
//! fields, Lie series and numeric generator flows.

pub mod error;
pub mod estimates;
pub mod field;
pub mod flow;
pub mod lie;
pub mod poisson;

pub use error::{BracketError, Result};
pub use estimates::{lattice_c, sobolev_bracket_bound, vector_field_bound};
pub use field::{hamiltonian_vector_field, velocity, TangentVector};
pub use flow::{midpoint_step, polynomial_flow, polynomial_flow_rk4, MidpointSettings};
pub use lie::{lie_series, lie_series_from_first};
pub use poisson::{bracket_with_sobolev_sq, poisson, poisson_truncated, poisson_with_generator, sobolev_polynomial, SymplecticForm};

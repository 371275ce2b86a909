//! Builds `H = H0 + P` on the Fourier lattice from a polynomial nonlinearity `F(x, psi, conj psi)`.

pub mod error;
pub mod hamiltonian;
pub mod io;
pub mod spec;
pub mod verify;

pub use error::{FrontendError, Result};
pub use hamiltonian::{build_type1, build_type2, BuildReport, Equation, Hamiltonian};
pub use spec::{NonlinearTerm, NonlinearitySpec};
pub use verify::{psi_norm, qaz_constants, verify_structure, ConjugationFailure, StructureReport};

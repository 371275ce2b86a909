//! Normal forms: small divisors, the resonant projector, the homological
//! equation and the Birkhoff iteration `H o T = H0 + Z + R_N + R_T`.

pub mod birkhoff;
pub mod error;
pub mod homological;
pub mod io;
pub mod resonance;
pub mod transform;

pub use birkhoff::{birkhoff_iterate, Diagnostics, NormalFormResult, StageDiagnostics};
pub use error::{NormalFormError, Result};
pub use homological::{homological_residual, solve_homological};
pub use resonance::{is_resonant_term, m_lk, nf_projector, resonance_threshold, small_divisor, NWindow, NormalFormParams};
pub use transform::{near_identity_ratio, transform_state, Direction, TransformSettings};

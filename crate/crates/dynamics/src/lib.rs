//! Time integration of `H = H0 + P` on Fourier coefficients, Sobolev drift
//! diagnostics, stability times and the drift-scaling experiment.

pub mod drift;
pub mod error;
pub mod integrate;
pub mod stability;
pub mod system;

pub use drift::{drift_functional, drift_scaling, geometric_ladder, DriftFunctional, DriftRung, DriftScalingConfig, DriftScalingReport, ScalingFit};
pub use error::{DynamicsError, Result};
pub use integrate::{integrate, Sample, Trajectory};
pub use stability::{initial_state, pair_norm, stability_time, StabilityOutcome};
pub use system::{HamiltonianSystem, IntegratorConfig, Scheme};

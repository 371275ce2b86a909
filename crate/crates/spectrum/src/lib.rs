//! Potentials, linear frequencies and the small-divisor side of the normal-form theory.
//!
//! The resonance machinery enumerates the index family `O_{r,N}` once and then checks
//! divisors per sampled potential, which keeps Monte-Carlo measure estimates cheap.

pub mod enumerate;
pub mod error;
pub mod measure;
pub mod potential;
pub mod scan;

pub use enumerate::{enumerate_o, in_o_set, tail_cap, DEFAULT_BUDGET};
pub use error::{Result, SpectrumError};
pub use measure::{
    critical_gammas, doubling_ratio, estimate_from_critical, lemma_bound, measure_estimate, measure_sweep, sample_seed,
    wilson_interval, MeasureConfig, MeasureEstimate,
};
pub use potential::{frequencies, sample_potential, Potential};
pub use scan::{critical_gamma, resonance_scan, scan_candidates, threshold_scale, ResonanceParams, ScanReport, Violation};

use poly_core::{FrequencyVector, MultiIndexPair, SparseExp};
use serde::{Deserialize, Serialize};

use crate::enumerate::enumerate_o;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonanceParams {
    pub gamma: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub l: SparseExp,
    pub k: SparseExp,
    pub divisor: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub theta: u8,
    pub r: u32,
    #[serde(rename = "N")]
    pub n: i32,
    pub params: ResonanceParams,
    pub candidates: usize,
    pub violations: Vec<Violation>,
}

impl ScanReport {
    pub fn is_nonresonant(&self) -> bool {
        self.violations.is_empty()
    }
}

/// `M_{lk} / N^alpha` with `M_{lk} = max(N, max |j|)`.
pub fn threshold_scale(mi: &MultiIndexPair, n: i32, alpha: f64) -> f64 {
    let m = mi.max_abs_mode().map_or(n, |j| j.max(n));
    m as f64 / (n as f64).powf(alpha)
}

/// Smallest `gamma` at which `mi` violates the non-resonance inequality.
pub fn critical_gamma(omega: &FrequencyVector, mi: &MultiIndexPair, n: i32, alpha: f64) -> f64 {
    omega.small_divisor(mi).abs() / threshold_scale(mi, n, alpha)
}

/// Checks a precomputed candidate list.
pub fn scan_candidates(omega: &FrequencyVector, candidates: &[MultiIndexPair], n: i32, params: ResonanceParams) -> Vec<Violation> {
    candidates
        .iter()
        .filter_map(|mi| {
            let divisor = omega.small_divisor(mi);
            let threshold = params.gamma * threshold_scale(mi, n, params.alpha);
            (divisor.abs() <= threshold).then(|| Violation { l: mi.l_sparse(), k: mi.k_sparse(), divisor, threshold })
        })
        .collect()
}

/// Lists every element of `O_{r,N}` with `|<omega, I_theta(l-k)>| <= gamma M_{lk} / N^alpha`.
pub fn resonance_scan(omega: &FrequencyVector, r: u32, n: i32, params: ResonanceParams, budget: usize) -> Result<ScanReport> {
    let theta = omega.lattice.theta;
    let candidates = enumerate_o(r, n, theta, omega.lattice.j_max, budget)?;
    let violations = scan_candidates(omega, &candidates, n, params);
    Ok(ScanReport { theta, r, n, params, candidates: candidates.len(), violations })
}

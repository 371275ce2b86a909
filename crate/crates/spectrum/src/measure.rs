use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumerate::enumerate_o;
use crate::error::Result;
use crate::potential::{frequencies, sample_potential};
use crate::scan::critical_gamma;

const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureConfig {
    pub theta: u8,
    pub m: f64,
    pub r: u32,
    #[serde(rename = "N")]
    pub n: i32,
    pub alpha: f64,
    #[serde(rename = "J")]
    pub j_max: i32,
    pub samples: usize,
    pub seed: u64,
    pub budget: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureEstimate {
    pub gamma: f64,
    pub samples: usize,
    pub failures: usize,
    pub fraction: f64,
    pub ci: [f64; 2],
    /// `min(1, K gamma / N^(alpha - 2m - r - 4))` with `K = 4^(r+4+m) r^(m+3)`.
    pub lemma_bound: f64,
    pub within_lemma_bound: bool,
}

/// Seed of the `i`-th sampled potential.
pub fn sample_seed(seed: u64, i: usize) -> u64 {
    seed ^ (i as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// 95% Wilson score interval for `k` successes out of `n`.
pub fn wilson_interval(k: usize, n: usize) -> [f64; 2] {
    if n == 0 {
        return [0.0, 1.0];
    }
    let nf = n as f64;
    let p = k as f64 / nf;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / nf;
    let center = (p + z2 / (2.0 * nf)) / denom;
    let half = Z95 * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    [(center - half).max(0.0), (center + half).min(1.0)]
}

pub fn lemma_bound(cfg: &MeasureConfig, gamma: f64) -> f64 {
    let r = cfg.r as f64;
    let k = 4f64.powf(r + 4.0 + cfg.m) * r.powf(cfg.m + 3.0);
    let exponent = cfg.alpha - 2.0 * cfg.m - r - 4.0;
    (k * gamma / (cfg.n as f64).powf(exponent)).min(1.0)
}

/// For each sampled potential, the smallest `gamma` at which the scan becomes nonempty.
///
/// A sample fails at `gamma` exactly when `gamma >=` its critical value, so one pass serves
/// every `gamma`. Results are in sample order regardless of thread count.
pub fn critical_gammas(cfg: &MeasureConfig) -> Result<Vec<f64>> {
    let candidates = enumerate_o(cfg.r, cfg.n, cfg.theta, cfg.j_max, cfg.budget)?;
    (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let pot = sample_potential(cfg.theta, cfg.m, cfg.j_max, sample_seed(cfg.seed, i))?;
            let omega = frequencies(&pot)?;
            Ok(candidates.iter().map(|mi| critical_gamma(&omega, mi, cfg.n, cfg.alpha)).fold(f64::INFINITY, f64::min))
        })
        .collect()
}

pub fn estimate_from_critical(cfg: &MeasureConfig, critical: &[f64], gamma: f64) -> MeasureEstimate {
    let failures = critical.iter().filter(|&&g| g <= gamma).count();
    let samples = critical.len();
    let fraction = if samples == 0 { 0.0 } else { failures as f64 / samples as f64 };
    let ci = wilson_interval(failures, samples);
    let bound = lemma_bound(cfg, gamma);
    MeasureEstimate { gamma, samples, failures, fraction, ci, lemma_bound: bound, within_lemma_bound: ci[0] <= bound }
}

/// Monte-Carlo fraction of sampled potentials that are resonant at `gamma`.
pub fn measure_estimate(cfg: &MeasureConfig, gamma: f64) -> Result<MeasureEstimate> {
    Ok(estimate_from_critical(cfg, &critical_gammas(cfg)?, gamma))
}

/// Estimates for several `gamma` values on the same sampled potentials.
pub fn measure_sweep(cfg: &MeasureConfig, gammas: &[f64]) -> Result<Vec<MeasureEstimate>> {
    let critical = critical_gammas(cfg)?;
    Ok(gammas.iter().map(|&g| estimate_from_critical(cfg, &critical, g)).collect())
}

/// Least-squares slope of `log2 fraction` against `log2 gamma`; `2^slope` is the ratio per doubling.
pub fn doubling_ratio(estimates: &[MeasureEstimate]) -> Option<f64> {
    let pts: Vec<(f64, f64)> =
        estimates.iter().filter(|e| e.fraction > 0.0).map(|e| (e.gamma.log2(), e.fraction.log2())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| 2f64.powf(sxy / sxx))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_examples() {
        let [lo, hi] = wilson_interval(0, 100);
        assert!(lo.abs() < 1e-15);
        assert!((hi - 0.036_994).abs() < 1e-5);
        let [lo, hi] = wilson_interval(50, 100);
        assert!((lo - 0.403_832).abs() < 1e-5 && (hi - 0.596_168).abs() < 1e-5);
    }

    #[test]
    fn seeds_are_distinct() {
        let s: std::collections::BTreeSet<u64> = (0..1000).map(|i| sample_seed(7, i)).collect();
        assert_eq!(s.len(), 1000);
    }
}

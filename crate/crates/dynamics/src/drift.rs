//! Instantaneous Sobolev drift `d||u||_p^2/dt` and its scaling with the state norm.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use bracket::{bracket_with_sobolev_sq, SymplecticForm};
use poly_core::{LatticeConfig, Polynomial, State};

use crate::error::{DynamicsError, Result};

/// `{H, ||u||_p^2}` precomputed from a list of Hamiltonian parts.
#[derive(Debug, Clone)]
pub struct DriftFunctional {
    pub p: f64,
    pub bracket: Polynomial,
}

impl DriftFunctional {
    pub fn new(parts: &[&Polynomial], p: f64, form: SymplecticForm) -> Result<Self> {
        let lattice = parts.first().map(|f| f.lattice).ok_or_else(|| DynamicsError::InvalidConfig("no Hamiltonian parts".into()))?;
        let mut bracket = Polynomial::zero(lattice);
        for part in parts {
            if part.lattice != lattice {
                return Err(DynamicsError::LatticeMismatch);
            }
            bracket = bracket.add(&bracket_with_sobolev_sq(part, p, form))?;
        }
        bracket.prune(0.0);
        Ok(DriftFunctional { p, bracket })
    }

    /// Identically zero, as for `H0` alone.
    pub fn is_conserved(&self) -> bool {
        self.bracket.is_empty()
    }

    pub fn eval(&self, s: &State) -> f64 {
        self.bracket.eval(s).re
    }
}

/// `d||u||_p^2/dt` at `s` along the flow of `sum(parts)`.
pub fn drift_functional(parts: &[&Polynomial], s: &State, p: f64, form: SymplecticForm) -> Result<f64> {
    Ok(DriftFunctional::new(parts, p, form)?.eval(s))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriftScalingConfig {
    pub states: usize,
    pub seed: u64,
    /// Random directions are damped by `<j>^{-decay}` before normalization.
    pub decay: f64,
}

impl Default for DriftScalingConfig {
    fn default() -> Self {
        DriftScalingConfig { states: 64, seed: 1, decay: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriftRung {
    pub radius: f64,
    pub max_drift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ScalingFit {
    /// The drift vanishes identically; no exponent is defined.
    Conserved,
    Fitted { slope: f64, intercept: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriftScalingReport {
    pub p: f64,
    pub config: DriftScalingConfig,
    pub rungs: Vec<DriftRung>,
    pub fit: ScalingFit,
}

impl DriftScalingReport {
    pub fn slope(&self) -> Option<f64> {
        match self.fit {
            ScalingFit::Fitted { slope, .. } => Some(slope),
            ScalingFit::Conserved => None,
        }
    }

    pub fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(out, "R,max_drift")?;
        for r in &self.rungs {
            writeln!(out, "{:e},{:e}", r.radius, r.max_drift)?;
        }
        Ok(())
    }
}

/// Checks that `ladder` is positive, geometric and has at least four rungs.
pub fn validate_ladder(ladder: &[f64]) -> Result<()> {
    if ladder.len() < 4 {
        return Err(DynamicsError::DegenerateLadder(format!("need at least 4 rungs, got {}", ladder.len())));
    }
    if ladder.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
        return Err(DynamicsError::DegenerateLadder("radii must be positive".into()));
    }
    let q = ladder[1] / ladder[0];
    if (q - 1.0).abs() < 1e-12 {
        return Err(DynamicsError::DegenerateLadder("ratio must differ from 1".into()));
    }
    for w in ladder.windows(2) {
        if ((w[1] / w[0]) / q - 1.0).abs() > 1e-9 {
            return Err(DynamicsError::DegenerateLadder("radii are not geometric".into()));
        }
    }
    Ok(())
}

/// `count` radii `r0, r0 q, r0 q^2, ...`.
pub fn geometric_ladder(r0: f64, q: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| r0 * q.powi(i as i32)).collect()
}

/// Least-squares line through `(x_i, y_i)`, returned as `(slope, intercept)`.
pub fn least_squares(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Directions of unit `||u||_p` shared by every rung.
pub fn drift_directions(lattice: LatticeConfig, p: f64, cfg: &DriftScalingConfig) -> Vec<State> {
    (0..cfg.states)
        .map(|i| State::random(lattice, p, 1.0, cfg.decay, cfg.seed ^ ((i as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))))
        .collect()
}

/// Fits `log max|drift|` against `log R` over a geometric ladder.
pub fn drift_scaling(parts: &[&Polynomial], p: f64, form: SymplecticForm, ladder: &[f64], cfg: &DriftScalingConfig) -> Result<DriftScalingReport> {
    validate_ladder(ladder)?;
    if cfg.states < 50 {
        return Err(DynamicsError::InvalidConfig(format!("need at least 50 states, got {}", cfg.states)));
    }
    let functional = DriftFunctional::new(parts, p, form)?;
    let dirs = drift_directions(functional.bracket.lattice, p, cfg);
    let rungs: Vec<DriftRung> = ladder
        .par_iter()
        .map(|&radius| {
            let max_drift = dirs.iter().map(|d| functional.eval(&d.scaled(radius)).abs()).fold(0.0, f64::max);
            DriftRung { radius, max_drift }
        })
        .collect();
    let fit = if functional.is_conserved() || rungs.iter().all(|r| r.max_drift == 0.0) {
        ScalingFit::Conserved
    } else if rungs.iter().any(|r| r.max_drift == 0.0) {
        return Err(DynamicsError::DegenerateLadder("drift vanishes on part of the ladder".into()));
    } else {
        let x: Vec<f64> = rungs.iter().map(|r| r.radius.ln()).collect();
        let y: Vec<f64> = rungs.iter().map(|r| r.max_drift.ln()).collect();
        let (slope, intercept) = least_squares(&x, &y);
        ScalingFit::Fitted { slope, intercept }
    };
    Ok(DriftScalingReport { p, config: *cfg, rungs, fit })
}

//! Escape times of `||(u, ubar)||_p` from a ball.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use poly_core::{bracket_j, Complex64, LatticeConfig, State};

use crate::error::{DynamicsError, Result};
use crate::integrate::{step_grid, Stepper};
use crate::system::{HamiltonianSystem, IntegratorConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum StabilityOutcome {
    Escaped { t: f64 },
    Survived { t_max: f64 },
}

impl StabilityOutcome {
    /// Escape time, or `t_max` for a surviving run.
    pub fn time(&self) -> f64 {
        match *self {
            StabilityOutcome::Escaped { t } => t,
            StabilityOutcome::Survived { t_max } => t_max,
        }
    }

    pub fn survived(&self) -> bool {
        matches!(self, StabilityOutcome::Survived { .. })
    }
}

/// `||(u, ubar)||_p = sqrt(2) ||u||_p` on the real slice.
pub fn pair_norm(s: &State, p: f64) -> f64 {
    (2.0 * s.sobolev_norm_sq(p)).sqrt()
}

/// `u_j = <j>^{-(p+1)} e^{i phi_j}` with seeded phases, scaled to `||(u, ubar)||_p = epsilon`.
pub fn initial_state(lattice: LatticeConfig, p: f64, epsilon: f64, seed: u64) -> State {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u: Vec<Complex64> = lattice
        .modes()
        .iter()
        .map(|&j| Complex64::from_polar(bracket_j(j).powf(-(p + 1.0)), rng.gen_range(0.0..TAU)))
        .collect();
    let s = State { lattice, u };
    let n = pair_norm(&s, p);
    s.scaled(epsilon / n)
}

/// First time with `||(u, ubar)||_p >= threshold_factor * epsilon`, checked after every step.
pub fn stability_time(
    sys: &HamiltonianSystem,
    epsilon: f64,
    p: f64,
    cfg: &IntegratorConfig,
    t_max: f64,
    threshold_factor: f64,
    seed: u64,
) -> Result<StabilityOutcome> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(DynamicsError::InvalidConfig(format!("epsilon must be positive, got {epsilon}")));
    }
    if !(t_max > 0.0 && threshold_factor > 1.0) {
        return Err(DynamicsError::InvalidConfig("T_max must be positive and threshold_factor above 1".into()));
    }
    let u0 = initial_state(sys.omega.lattice, p, epsilon, seed);
    let limit = threshold_factor * epsilon;
    let mut stepper = Stepper::new(sys, &u0, *cfg)?;
    let (n, h) = step_grid(t_max, cfg.dt);
    for i in 1..=n {
        stepper.step(h)?;
        if pair_norm(&stepper.state(), p) >= limit {
            return Ok(StabilityOutcome::Escaped { t: i as f64 * h });
        }
    }
    Ok(StabilityOutcome::Survived { t_max })
}

//! Hamiltonians `H = H0 + P` and integrator settings.

use serde::{Deserialize, Serialize};

use bracket::SymplecticForm;
use poly_core::{FrequencyVector, Polynomial, State};

use crate::error::{DynamicsError, Result};

/// A Hamiltonian split into its diagonal quadratic part and the perturbation.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianSystem {
    pub omega: FrequencyVector,
    pub p: Polynomial,
}

impl HamiltonianSystem {
    pub fn new(omega: FrequencyVector, p: Polynomial) -> Result<Self> {
        if omega.lattice != p.lattice {
            return Err(DynamicsError::LatticeMismatch);
        }
        Ok(HamiltonianSystem { omega, p })
    }

    /// The purely linear system `H = H0`.
    pub fn linear(omega: FrequencyVector) -> Self {
        let p = Polynomial::zero(omega.lattice);
        HamiltonianSystem { omega, p }
    }

    pub fn form(&self) -> SymplecticForm {
        SymplecticForm::of(&self.omega.lattice)
    }

    /// `H0 + P` as one polynomial.
    pub fn total(&self) -> Result<Polynomial> {
        Ok(self.omega.h0_polynomial().add(&self.p)?)
    }

    /// Real part of `H(u)`.
    pub fn energy(&self, s: &State) -> f64 {
        let h0: f64 = self.omega.omega.iter().zip(&s.u).map(|(w, z)| w * z.norm_sqr()).sum();
        h0 + self.p.eval(s).re
    }

    pub(crate) fn check_state(&self, s: &State) -> Result<()> {
        if s.lattice != self.omega.lattice || s.u.len() != self.omega.omega.len() {
            return Err(DynamicsError::LatticeMismatch);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Strang splitting: exact `H0` half steps around an implicit midpoint step on `P`.
    ImplicitMidpoint,
    /// Classical RK4 on the full vector field.
    Rk4Reference,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub scheme: Scheme,
    pub dt: f64,
    #[serde(default = "default_tol")]
    pub fixed_point_tol: f64,
    #[serde(default = "default_iters")]
    pub max_iters: usize,
    /// Store every `record_every`-th step in the trajectory.
    #[serde(default = "default_record")]
    pub record_every: usize,
}

fn default_tol() -> f64 {
    1e-14
}

fn default_iters() -> usize {
    100
}

fn default_record() -> usize {
    1
}

/// Number of times a failing step is halved before giving up.
pub const MAX_HALVINGS: u32 = 4;

impl IntegratorConfig {
    pub fn midpoint(dt: f64) -> Self {
        IntegratorConfig {
            scheme: Scheme::ImplicitMidpoint,
            dt,
            fixed_point_tol: default_tol(),
            max_iters: default_iters(),
            record_every: 1,
        }
    }

    pub fn rk4(dt: f64) -> Self {
        IntegratorConfig { scheme: Scheme::Rk4Reference, ..Self::midpoint(dt) }
    }

    /// `dt = 1e-3 * 2 pi / max |omega_j|`.
    pub fn default_for(omega: &FrequencyVector) -> Self {
        let w = omega.max_abs();
        let dt = if w > 0.0 { 1e-3 * std::f64::consts::TAU / w } else { 1e-3 };
        Self::midpoint(dt)
    }

    pub fn with_record_every(mut self, every: usize) -> Self {
        self.record_every = every;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(DynamicsError::InvalidConfig(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.fixed_point_tol.is_finite() && self.fixed_point_tol > 0.0) {
            return Err(DynamicsError::InvalidConfig("fixed_point_tol must be positive".into()));
        }
        if self.max_iters == 0 || self.record_every == 0 {
            return Err(DynamicsError::InvalidConfig("max_iters and record_every must be at least 1".into()));
        }
        Ok(())
    }

    /// Message when `dt * max |omega_j| > 1`.
    pub fn stability_advisory(&self, omega: &FrequencyVector) -> Option<String> {
        let v = self.dt * omega.max_abs();
        (v > 1.0).then(|| format!("dt * max|omega| = {v:.3} exceeds 1"))
    }
}

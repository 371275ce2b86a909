use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{PolyError, Result};
use crate::lattice::{bracket_j, LatticeConfig};

/// Dense amplitude vector `u` over the lattice modes. `ubar` is always `conj(u)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub lattice: LatticeConfig,
    pub u: Vec<Complex64>,
}

impl State {
    pub fn zeros(lattice: LatticeConfig) -> Self {
        State { lattice, u: vec![Complex64::new(0.0, 0.0); lattice.len()] }
    }

    pub fn from_modes(lattice: LatticeConfig, values: &[(i32, Complex64)]) -> Result<Self> {
        let mut s = Self::zeros(lattice);
        for &(j, v) in values {
            let idx = lattice.index_of(j).ok_or(PolyError::ModeOutOfLattice(j))?;
            s.u[idx] += v;
        }
        Ok(s)
    }

    pub fn get(&self, j: i32) -> Complex64 {
        self.lattice.index_of(j).map_or(Complex64::new(0.0, 0.0), |i| self.u[i])
    }

    /// `sum_j <j>^{2p} |u_j|^2`.
    pub fn sobolev_norm_sq(&self, p: f64) -> f64 {
        self.lattice
            .modes()
            .iter()
            .zip(&self.u)
            .map(|(&j, z)| bracket_j(j).powf(2.0 * p) * z.norm_sqr())
            .sum()
    }

    pub fn sobolev_norm(&self, p: f64) -> f64 {
        self.sobolev_norm_sq(p).sqrt()
    }

    /// `sum_j sgn^theta(j) j |u_j|^2`, conserved when every term has zero momentum.
    ///
    /// For theta 0 this is `sum_j j |u_j|^2`; for theta 1 it is `sum_j |j| |u_j|^2`.
    pub fn momentum_functional(&self) -> f64 {
        self.lattice
            .modes()
            .iter()
            .zip(&self.u)
            .map(|(&j, z)| self.lattice.sgn_theta(j) * j as f64 * z.norm_sqr())
            .sum()
    }

    pub fn scaled(&self, s: f64) -> Self {
        State { lattice: self.lattice, u: self.u.iter().map(|z| z * s).collect() }
    }

    /// Rescales so that `||u||_p = target`. A zero state is returned unchanged.
    pub fn with_norm(&self, p: f64, target: f64) -> Self {
        let n = self.sobolev_norm(p);
        if n == 0.0 {
            self.clone()
        } else {
            self.scaled(target / n)
        }
    }

    pub fn add(&self, other: &State) -> Self {
        State { lattice: self.lattice, u: self.u.iter().zip(&other.u).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &State) -> Self {
        State { lattice: self.lattice, u: self.u.iter().zip(&other.u).map(|(a, b)| a - b).collect() }
    }

    /// Masks modes with `|j| <= n` to zero (`Gamma_{>N}`).
    pub fn project_tail(&self, n: i32) -> Self {
        self.masked(|j| j.abs() > n)
    }

    /// Masks modes with `|j| > n` to zero (`Gamma_{<=N}`).
    pub fn project_head(&self, n: i32) -> Self {
        self.masked(|j| j.abs() <= n)
    }

    fn masked(&self, keep: impl Fn(i32) -> bool) -> Self {
        let u = self
            .lattice
            .modes()
            .iter()
            .zip(&self.u)
            .map(|(&j, &z)| if keep(j) { z } else { Complex64::new(0.0, 0.0) })
            .collect();
        State { lattice: self.lattice, u }
    }

    /// Random state with independent complex Gaussian-like entries damped by
    /// `<j>^{-decay}`, rescaled to `||u||_p = norm`.
    pub fn random(lattice: LatticeConfig, p: f64, norm: f64, decay: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = lattice
            .modes()
            .iter()
            .map(|&j| {
                let amp = bracket_j(j).powf(-decay);
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * amp
            })
            .collect();
        State { lattice, u }.with_norm(p, norm)
    }

    pub fn is_finite(&self) -> bool {
        self.u.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

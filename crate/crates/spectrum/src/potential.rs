use std::collections::BTreeMap;

use poly_core::{bracket_j, FrequencyVector, LatticeConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpectrumError};

/// Sampled potential data `v_j = V_j <j>^m` in `[-1/2, 1/2]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Potential {
    pub theta: u8,
    pub m: f64,
    #[serde(rename = "J")]
    pub j_max: i32,
    pub v: BTreeMap<i32, f64>,
    pub seed: u64,
}

impl Potential {
    /// The zero potential on the standard lattice.
    pub fn zero(theta: u8, m: f64, j_max: i32) -> Result<Self> {
        let lattice = LatticeConfig::standard(theta, j_max)?;
        Ok(Potential { theta, m, j_max, v: lattice.modes().into_iter().map(|j| (j, 0.0)).collect(), seed: 0 })
    }

    pub fn lattice(&self) -> Result<LatticeConfig> {
        Ok(LatticeConfig::standard(self.theta, self.j_max)?)
    }

    pub fn get(&self, j: i32) -> f64 {
        self.v.get(&j).copied().unwrap_or(0.0)
    }

    /// Checks range and the theta-dependent symmetry.
    pub fn validate(&self) -> Result<()> {
        if !(self.m > 0.5) {
            return Err(SpectrumError::InvalidDecay(self.m));
        }
        let lattice = self.lattice()?;
        for (&j, &v) in &self.v {
            if !lattice.contains(j) {
                return Err(SpectrumError::Mismatch(format!("mode {j} outside the lattice")));
            }
            if !(-0.5..=0.5).contains(&v) {
                return Err(SpectrumError::Mismatch(format!("v_{j} = {v} outside [-1/2, 1/2]")));
            }
            if self.theta == 0 && self.get(-j) != v {
                return Err(SpectrumError::Mismatch(format!("v_{j} != v_{}", -j)));
            }
        }
        Ok(())
    }
}

/// Draws `v_j` uniformly on `[-1/2, 1/2]`. For theta 0 the nonnegative modes
/// are drawn and mirrored; for theta 1 every nonzero mode is independent.
pub fn sample_potential(theta: u8, m: f64, j_max: i32, seed: u64) -> Result<Potential> {
    if !(m > 0.5) {
        return Err(SpectrumError::InvalidDecay(m));
    }
    LatticeConfig::standard(theta, j_max)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = BTreeMap::new();
    if theta == 0 {
        for j in 0..=j_max {
            let x = rng.gen_range(-0.5..=0.5);
            v.insert(j, x);
            v.insert(-j, x);
        }
    } else {
        for j in 1..=j_max {
            v.insert(j, rng.gen_range(-0.5..=0.5));
            v.insert(-j, rng.gen_range(-0.5..=0.5));
        }
    }
    Ok(Potential { theta, m, j_max, v, seed })
}

/// theta 0: `omega_j = -j^2 + v_j / <j>^m`; theta 1: `omega_j = sgn(j) (-j^2 + v_j / |j|^m)`.
pub fn frequencies(pot: &Potential) -> Result<FrequencyVector> {
    let lattice = pot.lattice()?;
    let omega = lattice
        .modes()
        .into_iter()
        .map(|j| {
            let base = -((j * j) as f64) + pot.get(j) / bracket_j(j).powf(pot.m);
            if pot.theta == 1 {
                (j.signum() as f64) * base
            } else {
                base
            }
        })
        .collect();
    Ok(FrequencyVector { lattice, omega })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_is_deterministic_and_symmetric() {
        let a = sample_potential(0, 1.0, 6, 42).unwrap();
        assert_eq!(a, sample_potential(0, 1.0, 6, 42).unwrap());
        assert_ne!(a, sample_potential(0, 1.0, 6, 43).unwrap());
        assert!((-6..=6).all(|j| a.v[&j] == a.v[&-j]));
        a.validate().unwrap();
        let b = sample_potential(1, 1.0, 6, 42).unwrap();
        assert!(!b.v.contains_key(&0));
        assert_eq!(b.v.len(), 12);
        b.validate().unwrap();
        assert!(sample_potential(0, 0.5, 6, 1).is_err());
    }

    #[test]
    fn frequency_examples() {
        let zero = frequencies(&Potential::zero(0, 1.0, 4).unwrap()).unwrap();
        assert!((-4..=4).all(|j| zero.get(j) == -((j * j) as f64)));
        let mut p = Potential::zero(0, 1.0, 4).unwrap();
        p.v.insert(2, 0.5);
        p.v.insert(-2, 0.5);
        assert_eq!(frequencies(&p).unwrap().get(2), -3.75);
        let mut q = Potential::zero(1, 1.0, 4).unwrap();
        q.v.insert(-2, 0.5);
        assert_eq!(frequencies(&q).unwrap().get(-2), 3.75);
        let s = frequencies(&sample_potential(0, 2.0, 5, 9).unwrap()).unwrap();
        assert!((-5..=5).all(|j| s.get(j) == s.get(-j)));
    }
}

use serde::{Deserialize, Serialize};

use crate::error::{PolyError, Result};

/// Finite Galerkin lattice of Fourier modes `|j| <= J`.
///
/// `theta` selects the symplectic form: with `theta = 1` the zero mode is
/// never present.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeConfig {
    pub theta: u8,
    #[serde(rename = "J")]
    pub j_max: i32,
    pub include_zero: bool,
}

impl LatticeConfig {
    pub fn new(theta: u8, j_max: i32, include_zero: bool) -> Result<Self> {
        let lat = LatticeConfig { theta, j_max, include_zero };
        lat.validate()?;
        Ok(lat)
    }

    /// The default lattice for a given form: `Z` for theta 0, `Z \ {0}` for theta 1.
    pub fn standard(theta: u8, j_max: i32) -> Result<Self> {
        Self::new(theta, j_max, theta == 0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.theta > 1 {
            return Err(PolyError::InvalidLattice(format!("theta must be 0 or 1, got {}", self.theta)));
        }
        if self.j_max < 1 {
            return Err(PolyError::InvalidLattice(format!("J must be >= 1, got {}", self.j_max)));
        }
        if self.theta == 1 && self.include_zero {
            return Err(PolyError::InvalidLattice("theta=1 excludes the zero mode".into()));
        }
        Ok(())
    }

    /// Modes in increasing order.
    pub fn modes(&self) -> Vec<i32> {
        (-self.j_max..=self.j_max).filter(|&j| j != 0 || self.include_zero).collect()
    }

    pub fn len(&self) -> usize {
        2 * self.j_max as usize + usize::from(self.include_zero)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, j: i32) -> bool {
        j.abs() <= self.j_max && (j != 0 || self.include_zero)
    }

    /// Dense position of mode `j`.
    pub fn index_of(&self, j: i32) -> Option<usize> {
        if !self.contains(j) {
            return None;
        }
        let shifted = (j + self.j_max) as usize;
        if !self.include_zero && j > 0 {
            Some(shifted - 1)
        } else {
            Some(shifted)
        }
    }

    /// `sgn^theta(j)`, equal to 1 when theta is 0.
    pub fn sgn_theta(&self, j: i32) -> f64 {
        if self.theta == 1 && j < 0 {
            -1.0
        } else {
            1.0
        }
    }

    /// `sum_j <j>^{-2}` over the lattice, squared root taken: the constant `c` of the estimates.
    pub fn c_constant(&self) -> f64 {
        self.modes().iter().map(|&j| bracket_j(j).powi(-2)).sum::<f64>().sqrt()
    }
}

/// `<j> = max(1, |j|)`.
pub fn bracket_j(j: i32) -> f64 {
    j.unsigned_abs().max(1) as f64
}

/// `<i> = max(1, |i|)` for momenta.
pub fn bracket_i(i: i64) -> f64 {
    i.unsigned_abs().max(1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_one_rejects_zero_mode() {
        assert!(LatticeConfig::new(1, 3, true).is_err());
        assert!(LatticeConfig::new(0, 0, true).is_err());
    }

    #[test]
    fn indexing_is_dense_and_ordered() {
        for lat in [LatticeConfig::standard(0, 4).unwrap(), LatticeConfig::standard(1, 4).unwrap()] {
            let modes = lat.modes();
            assert_eq!(modes.len(), lat.len());
            for (pos, &j) in modes.iter().enumerate() {
                assert_eq!(lat.index_of(j), Some(pos));
            }
            assert_eq!(lat.index_of(5), None);
        }
        assert_eq!(LatticeConfig::standard(1, 2).unwrap().index_of(0), None);
    }

    #[test]
    fn brackets_clamp_at_one() {
        assert_eq!(bracket_j(0), 1.0);
        assert_eq!(bracket_j(-3), 3.0);
        assert_eq!(bracket_i(0), 1.0);
    }
}

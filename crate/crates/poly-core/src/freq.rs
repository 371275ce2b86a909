use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coefficient::Coefficient;
use crate::lattice::LatticeConfig;
use crate::mono::MultiIndexPair;
use crate::polynomial::Polynomial;

/// Linear frequencies `omega_j` in lattice order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyVector {
    pub lattice: LatticeConfig,
    pub omega: Vec<f64>,
}

impl FrequencyVector {
    pub fn get(&self, j: i32) -> f64 {
        self.lattice.index_of(j).map_or(0.0, |i| self.omega[i])
    }

    /// `H0 = sum_j omega_j |u_j|^2` as a quadratic polynomial.
    pub fn h0_polynomial(&self) -> Polynomial {
        let mut p = Polynomial::zero(self.lattice);
        for (&j, &w) in self.lattice.modes().iter().zip(&self.omega) {
            p.accumulate(MultiIndexPair::new(&[(j, 1)], &[(j, 1)]), Coefficient::scalar(Complex64::new(w, 0.0)));
        }
        p
    }

    pub fn max_abs(&self) -> f64 {
        self.omega.iter().fold(0.0, |m, w| m.max(w.abs()))
    }

    /// `<omega, I_theta(l - k)> = sum_j omega_j sgn^theta(j) (l_j - k_j)`.
    pub fn small_divisor(&self, mi: &MultiIndexPair) -> f64 {
        mi.entries()
            .iter()
            .map(|&(j, a, b)| self.get(j) * self.lattice.sgn_theta(j) * (a as f64 - b as f64))
            .sum()
    }
}

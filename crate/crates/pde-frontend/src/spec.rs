use std::collections::BTreeMap;

use poly_core::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{FrontendError, Result};

/// One summand `sum_kappa c_kappa e^{i kappa x} psi^a conj(psi)^b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonlinearTerm {
    pub a: u32,
    pub b: u32,
    /// Pairs `(kappa, [re, im])`.
    pub x_modes: Vec<(i32, [f64; 2])>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonlinearitySpec {
    pub terms: Vec<NonlinearTerm>,
}

/// Combined coefficient of `e^{i kappa x} psi^a conj(psi)^b`.
pub type Monomials = BTreeMap<(u32, u32, i32), Complex64>;

impl NonlinearitySpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn zero() -> Self {
        NonlinearitySpec { terms: Vec::new() }
    }

    /// Convenience constructor for x-independent terms `(a, b, c)`.
    pub fn x_independent(terms: &[(u32, u32, Complex64)]) -> Self {
        NonlinearitySpec {
            terms: terms.iter().map(|&(a, b, c)| NonlinearTerm { a, b, x_modes: vec![(0, [c.re, c.im])] }).collect(),
        }
    }

    /// Sums repeated `(a, b, kappa)` entries, dropping exact zeros.
    pub fn monomials(&self) -> Monomials {
        let mut out = Monomials::new();
        for t in &self.terms {
            for &(kappa, [re, im]) in &t.x_modes {
                *out.entry((t.a, t.b, kappa)).or_default() += Complex64::new(re, im);
            }
        }
        out.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        out
    }

    pub fn max_x_mode(&self) -> i32 {
        self.terms.iter().flat_map(|t| t.x_modes.iter().map(|m| m.0.abs())).max().unwrap_or(0)
    }

    pub fn is_x_independent(&self) -> bool {
        self.monomials().keys().all(|&(_, _, kappa)| kappa == 0)
    }

    /// Checks `a + b >= 2`, finiteness and the reality pairing `(a,b,kappa,c) <-> (b,a,-kappa,conj c)`.
    pub fn validate(&self) -> Result<()> {
        for t in &self.terms {
            if t.a + t.b < 2 {
                return Err(FrontendError::InvalidSpec(format!("term a={}, b={} has degree below 2", t.a, t.b)));
            }
            if t.x_modes.iter().any(|m| !m.1[0].is_finite() || !m.1[1].is_finite()) {
                return Err(FrontendError::InvalidSpec(format!("term a={}, b={} has a non-finite coefficient", t.a, t.b)));
            }
        }
        let mons = self.monomials();
        for (&(a, b, kappa), &c) in &mons {
            let partner = mons.get(&(b, a, -kappa)).copied().unwrap_or_default();
            if (partner - c.conj()).norm() > 1e-12 * c.norm().max(1.0) {
                return Err(FrontendError::Unpaired { a, b, kappa });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_format() {
        let s = NonlinearitySpec::from_json(r#"{"terms":[{"a":2,"b":2,"x_modes":[[0,[1.0,0.0]]]}]}"#).unwrap();
        assert_eq!(s.terms[0].x_modes, vec![(0, [1.0, 0.0])]);
        s.validate().unwrap();
        assert!(s.is_x_independent());
    }

    #[test]
    fn reality_is_enforced() {
        let bad = NonlinearitySpec::x_independent(&[(3, 1, Complex64::new(1.0, 0.0))]);
        assert!(matches!(bad.validate(), Err(FrontendError::Unpaired { a: 3, b: 1, kappa: 0 })));
        let good = NonlinearitySpec::x_independent(&[(3, 1, Complex64::new(1.0, 2.0)), (1, 3, Complex64::new(1.0, -2.0))]);
        good.validate().unwrap();
        let complex_diag = NonlinearitySpec::x_independent(&[(2, 2, Complex64::new(0.0, 1.0))]);
        assert!(complex_diag.validate().is_err());
        let shifted = NonlinearitySpec {
            terms: vec![NonlinearTerm { a: 2, b: 2, x_modes: vec![(1, [0.5, 0.5]), (-1, [0.5, -0.5])] }],
        };
        shifted.validate().unwrap();
        assert_eq!(shifted.max_x_mode(), 1);
        let low = NonlinearitySpec::x_independent(&[(1, 0, Complex64::new(1.0, 0.0))]);
        assert!(low.validate().is_err());
    }
}

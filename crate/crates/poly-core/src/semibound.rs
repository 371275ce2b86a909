use serde::Serialize;

use crate::error::{PolyError, Result};
use crate::lattice::bracket_i;
use crate::mono::MultiIndexPair;
use crate::polynomial::Polynomial;

/// Per-term outcome of the semi-bound inequality.
#[derive(Debug, Clone, Serialize)]
pub struct SemiBoundTerm {
    pub mono: String,
    pub degree: u32,
    pub momentum: i64,
    pub measured: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SemiBoundReport {
    pub beta: f64,
    pub c: f64,
    pub violations: Vec<SemiBoundTerm>,
    pub worst_margin: f64,
    /// Smallest constant for which every term of degree >= 3 satisfies the bound.
    pub minimal_c: f64,
}

impl SemiBoundReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Structured size of a coefficient: the ledger sum
/// `sum |f^{i(l0,k0,i0)}| max(<i0>, <i0 - 2i>)` or `|tilde|`.
pub fn structured_size(mi: &MultiIndexPair, c: &crate::coefficient::Coefficient) -> Result<f64> {
    let i = mi.momentum();
    if let Some(ledger) = &c.ledger {
        Ok(ledger.iter().map(|e| e.inner.norm() * bracket_i(e.i0).max(bracket_i(e.i0 - 2 * i))).sum())
    } else if let Some(t) = c.tilde {
        Ok(t.norm())
    } else {
        Err(PolyError::Unstructured)
    }
}

/// Checks `measured <= C^{t-2} / <i>^beta` for every term.
pub fn semi_bound_check(f: &Polynomial, beta: f64, c: f64) -> Result<SemiBoundReport> {
    let mut violations = Vec::new();
    let mut worst_margin = f64::INFINITY;
    let mut minimal_c: f64 = 0.0;
    for (mi, coef) in f.terms() {
        let measured = structured_size(mi, coef)?;
        let t = mi.degree();
        let weight = bracket_i(mi.momentum()).powf(beta);
        let bound = c.powi(t as i32 - 2) / weight;
        worst_margin = worst_margin.min(bound - measured);
        if t > 2 {
            minimal_c = minimal_c.max((measured * weight).powf(1.0 / (t as f64 - 2.0)));
        }
        if measured > bound {
            violations.push(SemiBoundTerm { mono: mi.to_string(), degree: t, momentum: mi.momentum(), measured, bound });
        }
    }
    Ok(SemiBoundReport { beta, c, violations, worst_margin, minimal_c })
}

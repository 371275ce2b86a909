use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::mono::{sparse_get, sparse_momentum, MultiIndexPair, SparseExp};

/// One summand `f^{i(l0,k0,i0)}` of a structured coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub l0: SparseExp,
    pub k0: SparseExp,
    pub i0: i64,
    pub inner: Complex64,
}

impl LedgerEntry {
    /// The linear form `M(l0,k0) - i0/2`.
    pub fn linear_form(&self) -> f64 {
        sparse_momentum(&self.l0, &self.k0) as f64 - 0.5 * self.i0 as f64
    }

    pub fn value(&self) -> Complex64 {
        self.inner * self.linear_form()
    }

    /// Whether `0 <= l0 <= l` and `0 <= k0 <= k` against the owning monomial.
    pub fn fits(&self, mi: &MultiIndexPair) -> bool {
        self.l0.iter().all(|&(j, e)| e <= mi.l(j)) && self.k0.iter().all(|&(j, e)| e <= mi.k(j))
    }

    pub fn key(&self) -> (&SparseExp, &SparseExp, i64) {
        (&self.l0, &self.k0, self.i0)
    }
}

/// Coefficient of a monomial. The scalar is authoritative; `ledger` and
/// `tilde` carry the optional structured representations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub scalar: Complex64,
    pub ledger: Option<Vec<LedgerEntry>>,
    pub tilde: Option<Complex64>,
}

impl Coefficient {
    pub fn scalar(c: Complex64) -> Self {
        Coefficient { scalar: c, ledger: None, tilde: None }
    }

    /// Structured coefficient whose scalar is reconstructed from its ledger.
    pub fn from_ledger(entries: Vec<LedgerEntry>) -> Self {
        let scalar = entries.iter().map(LedgerEntry::value).sum();
        Coefficient { scalar, ledger: Some(entries), tilde: None }
    }

    /// Factored coefficient `tilde * prod <j>^{(l_j+k_j)/2}`.
    pub fn from_tilde(tilde: Complex64, mi: &MultiIndexPair) -> Self {
        Coefficient { scalar: tilde * mi.bracket_weight(), ledger: None, tilde: Some(tilde) }
    }

    pub fn is_structured(&self) -> bool {
        self.ledger.is_some() || self.tilde.is_some()
    }

    pub fn ledger_scalar(&self) -> Option<Complex64> {
        self.ledger.as_ref().map(|l| l.iter().map(LedgerEntry::value).sum())
    }

    /// Adds another coefficient of the same monomial. Structure survives only
    /// when both sides carry it.
    pub fn add_assign(&mut self, other: &Coefficient) {
        self.scalar += other.scalar;
        self.ledger = match (self.ledger.take(), &other.ledger) {
            (Some(mut a), Some(b)) => {
                a.extend(b.iter().cloned());
                Some(a)
            }
            _ => None,
        };
        self.tilde = match (self.tilde, other.tilde) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
    }

    pub fn scaled(&self, s: Complex64) -> Coefficient {
        Coefficient {
            scalar: self.scalar * s,
            ledger: self.ledger.as_ref().map(|l| {
                l.iter().map(|e| LedgerEntry { inner: e.inner * s, ..e.clone() }).collect()
            }),
            tilde: self.tilde.map(|t| t * s),
        }
    }

    /// Merges ledger entries sharing the same `(l0,k0,i0)` and drops zero entries.
    pub fn canonicalize_ledger(&mut self) {
        if let Some(entries) = self.ledger.as_mut() {
            entries.sort_by(|a, b| a.key().cmp(&b.key()));
            let mut merged: Vec<LedgerEntry> = Vec::with_capacity(entries.len());
            for e in entries.drain(..) {
                match merged.last_mut() {
                    Some(last) if last.key() == e.key() => last.inner += e.inner,
                    _ => merged.push(e),
                }
            }
            merged.retain(|e| e.inner != Complex64::new(0.0, 0.0));
            *entries = merged;
        }
    }

    /// Relative mismatch between the scalar and its structured reconstruction.
    pub fn structure_mismatch(&self, mi: &MultiIndexPair) -> f64 {
        let mut worst = 0.0f64;
        let scale = self.scalar.norm().max(1e-300);
        if let Some(s) = self.ledger_scalar() {
            worst = worst.max((s - self.scalar).norm() / scale);
        }
        if let Some(t) = self.tilde {
            worst = worst.max((t * mi.bracket_weight() - self.scalar).norm() / scale);
        }
        worst
    }
}

/// Conjugate-partner key of a ledger entry: `(k - k0, l - l0, i0 - 2i)`.
pub fn partner_entry_key(mi: &MultiIndexPair, e: &LedgerEntry) -> (SparseExp, SparseExp, i64) {
    let i = mi.momentum();
    let mut lp: SparseExp = Vec::new();
    let mut kp: SparseExp = Vec::new();
    for &(j, a, b) in mi.entries() {
        let nl = b - sparse_get(&e.k0, j).min(b);
        let nk = a - sparse_get(&e.l0, j).min(a);
        if nl > 0 {
            lp.push((j, nl));
        }
        if nk > 0 {
            kp.push((j, nk));
        }
    }
    (lp, kp, e.i0 - 2 * i)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ledger_reconstructs_scalar() {
        let mi = MultiIndexPair::new(&[(1, 1)], &[(2, 1)]);
        let e = LedgerEntry { l0: vec![(1, 1)], k0: vec![], i0: 0, inner: Complex64::new(2.0, 0.0) };
        assert!(e.fits(&mi));
        let c = Coefficient::from_ledger(vec![e]);
        assert_eq!(c.scalar, Complex64::new(2.0, 0.0));
        assert!(c.structure_mismatch(&mi) < 1e-15);
    }

    #[test]
    fn adding_unstructured_drops_ledger() {
        let e = LedgerEntry { l0: vec![(1, 1)], k0: vec![], i0: 0, inner: Complex64::new(1.0, 0.0) };
        let mut c = Coefficient::from_ledger(vec![e]);
        c.add_assign(&Coefficient::scalar(Complex64::new(1.0, 0.0)));
        assert!(c.ledger.is_none());
        assert_eq!(c.scalar, Complex64::new(2.0, 0.0));
    }

    #[test]
    fn canonicalize_merges_keys() {
        let e = LedgerEntry { l0: vec![(1, 1)], k0: vec![], i0: 2, inner: Complex64::new(1.0, 0.0) };
        let mut c = Coefficient::from_ledger(vec![e.clone(), e]);
        c.canonicalize_ledger();
        assert_eq!(c.ledger.as_ref().unwrap().len(), 1);
        assert_eq!(c.ledger.unwrap()[0].inner, Complex64::new(2.0, 0.0));
    }

    #[test]
    fn partner_key_matches_conjugation_law() {
        let mi = MultiIndexPair::new(&[(1, 2)], &[(2, 1)]);
        let e = LedgerEntry { l0: vec![(1, 1)], k0: vec![], i0: 3, inner: Complex64::new(1.0, 0.0) };
        let (lp, kp, ip) = partner_entry_key(&mi, &e);
        assert_eq!(lp, vec![(2, 1)]);
        assert_eq!(kp, vec![(1, 1)]);
        assert_eq!(ip, 3);
    }
}

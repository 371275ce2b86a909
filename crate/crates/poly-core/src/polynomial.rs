//! Sparse polynomials in `(u, ubar)` keyed by canonical multi-index pairs.

use num_complex::Complex64;
use std::collections::BTreeMap;

use crate::coefficient::{partner_entry_key, Coefficient, LedgerEntry};
use crate::error::{PolyError, Result};
use crate::lattice::LatticeConfig;
use crate::mono::MultiIndexPair;
use crate::state::State;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Degree- and momentum-graded polynomial with optional structured coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    pub lattice: LatticeConfig,
    terms: BTreeMap<MultiIndexPair, Coefficient>,
    /// Set once an operation could not carry ledger or factored data along.
    pub structure_lost: bool,
}

/// A term whose conjugate partner does not match.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryViolation {
    pub mono: MultiIndexPair,
    pub momentum: i64,
    pub mismatch: f64,
}

impl Polynomial {
    pub fn zero(lattice: LatticeConfig) -> Self {
        Polynomial { lattice, terms: BTreeMap::new(), structure_lost: false }
    }

    pub fn from_terms(lattice: LatticeConfig, terms: impl IntoIterator<Item = (MultiIndexPair, Coefficient)>) -> Result<Self> {
        let mut p = Self::zero(lattice);
        for (mi, c) in terms {
            p.add_term(mi, c)?;
        }
        Ok(p)
    }

    /// Adds `c * u^l ubar^k`, merging with an existing term.
    pub fn add_term(&mut self, mi: MultiIndexPair, c: Coefficient) -> Result<()> {
        if let Some(j) = mi.modes().find(|&j| !self.lattice.contains(j)) {
            return Err(PolyError::ModeOutOfLattice(j));
        }
        self.add_term_unchecked(mi, c);
        Ok(())
    }

    pub(crate) fn add_term_unchecked(&mut self, mi: MultiIndexPair, c: Coefficient) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(mi) {
            Entry::Vacant(v) => {
                if c.scalar != ZERO || c.ledger.as_ref().is_some_and(|l| !l.is_empty()) {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let had = o.get().is_structured();
                o.get_mut().add_assign(&c);
                if had && !o.get().is_structured() {
                    self.structure_lost = true;
                }
                if o.get().scalar == ZERO {
                    o.remove();
                }
            }
        }
    }

    /// Inserts a term trusted to lie on the lattice. Used by algorithms that
    /// only recombine existing modes.
    pub fn accumulate(&mut self, mi: MultiIndexPair, c: Coefficient) {
        self.add_term_unchecked(mi, c);
    }

    pub fn add_scalar(&mut self, mi: MultiIndexPair, c: Complex64) -> Result<()> {
        self.add_term(mi, Coefficient::scalar(c))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndexPair, &Coefficient)> {
        self.terms.iter()
    }

    pub fn get(&self, mi: &MultiIndexPair) -> Option<&Coefficient> {
        self.terms.get(mi)
    }

    pub fn scalar_of(&self, mi: &MultiIndexPair) -> Complex64 {
        self.terms.get(mi).map_or(ZERO, |c| c.scalar)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndexPair::degree).min()
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndexPair::degree).max()
    }

    /// True when every term carries a ledger or a factored coefficient.
    pub fn is_structured(&self) -> bool {
        !self.structure_lost && self.terms.values().all(Coefficient::is_structured)
    }

    pub fn has_ledgers(&self) -> bool {
        !self.structure_lost && self.terms.values().all(|c| c.ledger.is_some())
    }

    pub fn filter(&self, mut keep: impl FnMut(&MultiIndexPair, &Coefficient) -> bool) -> Self {
        Polynomial {
            lattice: self.lattice,
            terms: self.terms.iter().filter(|(m, c)| keep(m, c)).map(|(m, c)| (m.clone(), c.clone())).collect(),
            structure_lost: self.structure_lost,
        }
    }

    pub fn homogeneous(&self, degree: u32) -> Self {
        self.filter(|m, _| m.degree() == degree)
    }

    pub fn degree_range(&self, lo: u32, hi: u32) -> Self {
        self.filter(|m, _| (lo..=hi).contains(&m.degree()))
    }

    pub fn add(&self, other: &Polynomial) -> Result<Self> {
        if self.lattice != other.lattice {
            return Err(PolyError::LatticeMismatch);
        }
        let mut out = self.clone();
        out.structure_lost |= other.structure_lost;
        for (m, c) in &other.terms {
            out.add_term_unchecked(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        if s == ZERO {
            return Polynomial { structure_lost: self.structure_lost, ..Self::zero(self.lattice) };
        }
        Polynomial {
            lattice: self.lattice,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.scaled(s))).collect(),
            structure_lost: self.structure_lost,
        }
    }

    /// Drops all ledgers and factored data, keeping scalars.
    pub fn to_scalar_mode(&self) -> Self {
        Polynomial {
            lattice: self.lattice,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), Coefficient::scalar(c.scalar))).collect(),
            structure_lost: true,
        }
    }

    /// Recomputes the factored coefficient of every term from its scalar.
    pub fn with_tilde(&self) -> Self {
        Polynomial {
            lattice: self.lattice,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut c = c.clone();
                    c.tilde = Some(c.scalar / m.bracket_weight());
                    (m.clone(), c)
                })
                .collect(),
            structure_lost: self.structure_lost,
        }
    }

    /// Removes terms below `rel * max|coefficient|`.
    pub fn prune(&mut self, rel: f64) {
        let cut = self.max_coefficient() * rel;
        self.terms.retain(|_, c| c.scalar.norm() > cut);
    }

    /// The momentum functional `sum_j sgn^theta(j) j |u_j|^2` as a quadratic polynomial.
    pub fn momentum_polynomial(lattice: LatticeConfig) -> Self {
        let mut p = Polynomial::zero(lattice);
        for j in lattice.modes() {
            if j != 0 {
                let w = lattice.sgn_theta(j) * j as f64;
                p.accumulate(MultiIndexPair::new(&[(j, 1)], &[(j, 1)]), Coefficient::scalar(Complex64::new(w, 0.0)));
            }
        }
        p
    }

    pub fn max_coefficient(&self) -> f64 {
        self.terms.values().map(|c| c.scalar.norm()).fold(0.0, f64::max)
    }

    pub fn canonicalize_ledgers(&mut self) {
        for c in self.terms.values_mut() {
            c.canonicalize_ledger();
        }
    }

    /// Largest relative mismatch between scalars and structured reconstructions.
    pub fn structure_mismatch(&self) -> f64 {
        self.terms.iter().map(|(m, c)| c.structure_mismatch(m)).fold(0.0, f64::max)
    }

    /// Evaluates on the real slice `ubar = conj(u)`.
    pub fn eval(&self, s: &State) -> Complex64 {
        let ubar: Vec<Complex64> = s.u.iter().map(|z| z.conj()).collect();
        self.eval_general(&s.u, &ubar)
    }

    /// Evaluates with independent `u` and `ubar` vectors (`0^0 = 1`).
    pub fn eval_general(&self, u: &[Complex64], ubar: &[Complex64]) -> Complex64 {
        let mut acc = ZERO;
        for (m, c) in &self.terms {
            let mut v = c.scalar;
            for &(j, a, b) in m.entries() {
                let idx = self.lattice.index_of(j).expect("term mode on lattice");
                v *= u[idx].powu(a) * ubar[idx].powu(b);
            }
            acc += v;
        }
        acc
    }

    /// Partial derivatives `(df/du_j, df/dubar_j)` on the real slice, in lattice order.
    pub fn gradient(&self, s: &State) -> (Vec<Complex64>, Vec<Complex64>) {
        let ubar: Vec<Complex64> = s.u.iter().map(|z| z.conj()).collect();
        self.gradient_general(&s.u, &ubar)
    }

    pub fn gradient_general(&self, u: &[Complex64], ubar: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
        let n = self.lattice.len();
        let mut du = vec![ZERO; n];
        let mut dubar = vec![ZERO; n];
        let mut factors: Vec<Complex64> = Vec::with_capacity(8);
        let mut idxs: Vec<usize> = Vec::with_capacity(8);
        for (m, c) in &self.terms {
            factors.clear();
            idxs.clear();
            for &(j, a, b) in m.entries() {
                let idx = self.lattice.index_of(j).expect("term mode on lattice");
                idxs.push(idx);
                factors.push(u[idx].powu(a) * ubar[idx].powu(b));
            }
            for (pos, &(_, a, b)) in m.entries().iter().enumerate() {
                let others: Complex64 = factors
                    .iter()
                    .enumerate()
                    .filter(|(q, _)| *q != pos)
                    .map(|(_, f)| *f)
                    .product::<Complex64>()
                    * c.scalar;
                let idx = idxs[pos];
                if a > 0 {
                    du[idx] += others * (a as f64) * u[idx].powu(a - 1) * ubar[idx].powu(b);
                }
                if b > 0 {
                    dubar[idx] += others * (b as f64) * u[idx].powu(a) * ubar[idx].powu(b - 1);
                }
            }
        }
        (du, dubar)
    }

    /// Terms whose coefficient is not the conjugate of the mirrored term.
    pub fn conj_symmetry_violations(&self, tol: f64) -> Vec<SymmetryViolation> {
        let mut out = Vec::new();
        for (m, c) in &self.terms {
            let partner = self.scalar_of(&m.swapped());
            let diff = (c.scalar.conj() - partner).norm();
            let scale = c.scalar.norm().max(partner.norm());
            if diff > tol * scale.max(1e-300) {
                out.push(SymmetryViolation { mono: m.clone(), momentum: m.momentum(), mismatch: diff });
            }
        }
        out
    }

    /// `conj(f^i_{lk}) = f^{-i}_{kl}` for every term, within relative `tol`.
    pub fn conj_symmetry_check(&self, tol: f64) -> bool {
        self.conj_symmetry_violations(tol).is_empty()
    }

    /// Checks the ledger conjugation law `conj f^{i(l0,k0,i0)}_{lk} = f^{-i(k-k0,l-l0,i0-2i)}_{kl}`.
    pub fn ledger_conjugation_violations(&self, tol: f64) -> Result<usize> {
        let mut merged = self.clone();
        merged.canonicalize_ledgers();
        let mut bad = 0;
        for (m, c) in &merged.terms {
            let ledger = c.ledger.as_ref().ok_or(PolyError::Unstructured)?;
            let partner = merged.terms.get(&m.swapped());
            for e in ledger {
                let key = partner_entry_key(m, e);
                let found: Complex64 = partner
                    .and_then(|p| p.ledger.as_ref())
                    .map(|pl| pl.iter().filter(|x| (x.l0.clone(), x.k0.clone(), x.i0) == key).map(|x| x.inner).sum())
                    .unwrap_or(ZERO);
                if (e.inner.conj() - found).norm() > tol * e.inner.norm().max(1e-300) {
                    bad += 1;
                }
            }
        }
        Ok(bad)
    }

    /// Checks that every ledger entry fits inside its monomial.
    pub fn ledger_entries_fit(&self) -> bool {
        self.terms.iter().all(|(m, c)| c.ledger.as_ref().is_none_or(|l| l.iter().all(|e| e.fits(m))))
    }

    pub fn into_terms(self) -> BTreeMap<MultiIndexPair, Coefficient> {
        self.terms
    }

    pub fn map_ledger(&self, f: impl Fn(&MultiIndexPair, &LedgerEntry) -> LedgerEntry) -> Self {
        let mut out = self.clone();
        for (m, c) in out.terms.iter_mut() {
            if let Some(l) = c.ledger.as_mut() {
                for e in l.iter_mut() {
                    *e = f(m, e);
                }
            }
        }
        out
    }
}

//! Poisson brackets `{f,g} = i sum_j sgn^theta(j) (df/du_j dg/dubar_j - df/dubar_j dg/du_j)`.

use std::collections::BTreeMap;

use poly_core::mono::{sparse_add_sub, sparse_get, SparseExp};
use poly_core::{bracket_j, Coefficient, Complex64, LatticeConfig, LedgerEntry, MultiIndexPair, Polynomial};

use crate::error::{BracketError, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// The symplectic form `w_theta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymplecticForm {
    pub theta: u8,
}

impl SymplecticForm {
    pub fn of(lattice: &LatticeConfig) -> Self {
        SymplecticForm { theta: lattice.theta }
    }

    pub fn sgn(&self, j: i32) -> f64 {
        if self.theta == 1 && j < 0 {
            -1.0
        } else {
            1.0
        }
    }
}

/// A single bracket contribution between an `f` term and a `g` term.
struct Contribution {
    mono: MultiIndexPair,
    /// Factor multiplying `c_f`: `+-i sgn(j) (exponent product) c_g`.
    weight: Complex64,
    /// `true` for the `df/du_j dg/dubar_j` half (case D1 of the ledger map).
    first_half: bool,
    j: i32,
}

/// Terms of `g` indexed by mode, split by whether they contain `u_j` or `ubar_j`.
struct ModeIndex<'a> {
    with_l: BTreeMap<i32, Vec<(&'a MultiIndexPair, &'a Coefficient)>>,
    with_k: BTreeMap<i32, Vec<(&'a MultiIndexPair, &'a Coefficient)>>,
}

impl<'a> ModeIndex<'a> {
    fn new(g: &'a Polynomial) -> Self {
        let mut with_l: BTreeMap<i32, Vec<_>> = BTreeMap::new();
        let mut with_k: BTreeMap<i32, Vec<_>> = BTreeMap::new();
        for (m, c) in g.terms() {
            for &(j, a, b) in m.entries() {
                if a > 0 {
                    with_l.entry(j).or_default().push((m, c));
                }
                if b > 0 {
                    with_k.entry(j).or_default().push((m, c));
                }
            }
        }
        ModeIndex { with_l, with_k }
    }
}

/// Visits every nonzero contribution of `{f_term, g}` whose degree does not exceed `max_degree`.
fn for_each_contribution(
    form: SymplecticForm,
    fm: &MultiIndexPair,
    idx: &ModeIndex<'_>,
    max_degree: Option<u32>,
    mut visit: impl FnMut(Contribution, &MultiIndexPair),
) {
    let fdeg = fm.degree();
    for &(j, a, b) in fm.entries() {
        let sg = form.sgn(j);
        if a > 0 {
            if let Some(list) = idx.with_k.get(&j) {
                let low_f = fm.lowered(j, true, false).expect("l_j > 0");
                for &(gm, gc) in list {
                    if max_degree.is_some_and(|d| fdeg + gm.degree() - 2 > d) {
                        continue;
                    }
                    let kj = gm.k(j);
                    let low_g = gm.lowered(j, false, true).expect("k_j > 0");
                    let weight = I * sg * (a as f64) * (kj as f64) * gc.scalar;
                    visit(Contribution { mono: low_f.mul(&low_g), weight, first_half: true, j }, gm);
                }
            }
        }
        if b > 0 {
            if let Some(list) = idx.with_l.get(&j) {
                let low_f = fm.lowered(j, false, true).expect("k_j > 0");
                for &(gm, gc) in list {
                    if max_degree.is_some_and(|d| fdeg + gm.degree() - 2 > d) {
                        continue;
                    }
                    let lj = gm.l(j);
                    let low_g = gm.lowered(j, true, false).expect("l_j > 0");
                    let weight = -I * sg * (b as f64) * (lj as f64) * gc.scalar;
                    visit(Contribution { mono: low_f.mul(&low_g), weight, first_half: false, j }, gm);
                }
            }
        }
    }
}

/// Accumulated coefficient with the absolute mass used to detect cancellation.
#[derive(Default)]
struct Acc {
    sum: Complex64,
    mass: f64,
    ledger: BTreeMap<(SparseExp, SparseExp, i64), Complex64>,
}

/// Relative size below which an accumulated sum is rounding residue of exact cancellation.
const CANCEL_REL: f64 = 64.0 * f64::EPSILON;

fn finish(lattice: LatticeConfig, acc: BTreeMap<MultiIndexPair, Acc>, ledgers: bool, tilde: bool) -> Polynomial {
    let mut out = Polynomial::zero(lattice);
    for (m, a) in acc {
        if a.sum.norm() <= CANCEL_REL * a.mass {
            continue;
        }
        let mut c = Coefficient::scalar(a.sum);
        if ledgers {
            c.ledger = Some(
                a.ledger
                    .into_iter()
                    .filter(|(_, v)| *v != Complex64::new(0.0, 0.0))
                    .map(|((l0, k0, i0), inner)| LedgerEntry { l0, k0, i0, inner })
                    .collect(),
            );
        }
        if tilde {
            c.tilde = Some(a.sum / m.bracket_weight());
        }
        out.accumulate(m, c);
    }
    out
}

fn check_lattices(f: &Polynomial, g: &Polynomial) -> Result<()> {
    if f.lattice != g.lattice {
        return Err(BracketError::LatticeMismatch);
    }
    Ok(())
}

/// `{f, g}_{w_theta}` in scalar mode (theta = 1 keeps the factored form when both inputs have it).
pub fn poisson(f: &Polynomial, g: &Polynomial, form: SymplecticForm) -> Result<Polynomial> {
    poisson_truncated(f, g, form, None)
}

/// `{f, g}` keeping only output terms of degree `<= max_degree`.
pub fn poisson_truncated(f: &Polynomial, g: &Polynomial, form: SymplecticForm, max_degree: Option<u32>) -> Result<Polynomial> {
    check_lattices(f, g)?;
    let idx = ModeIndex::new(g);
    let mut acc: BTreeMap<MultiIndexPair, Acc> = BTreeMap::new();
    for (fm, fc) in f.terms() {
        for_each_contribution(form, fm, &idx, max_degree, |c, _| {
            let v = c.weight * fc.scalar;
            let slot = acc.entry(c.mono).or_default();
            slot.sum += v;
            slot.mass += v.norm();
        });
    }
    let keep_tilde = form.theta == 1 && f.is_structured() && g.is_structured();
    let mut out = finish(f.lattice, acc, false, keep_tilde);
    out.structure_lost = !keep_tilde && !out.is_empty() && (f.is_structured() || g.is_structured());
    Ok(out)
}

/// Image of a ledger entry under the D-map for one contribution.
fn d_map(e: &LedgerEntry, fm: &MultiIndexPair, gm: &MultiIndexPair, j: i32, first_half: bool, i2: i64) -> (SparseExp, SparseExp, i64) {
    let moved = || {
        (
            sparse_add_sub(&e.l0, &gm.l_sparse(), Some(j)).expect("D-map keeps l0 nonnegative"),
            sparse_add_sub(&e.k0, &gm.k_sparse(), Some(j)).expect("D-map keeps k0 nonnegative"),
            e.i0 + 2 * i2,
        )
    };
    let stays = || (e.l0.clone(), e.k0.clone(), e.i0);
    if first_half {
        // l0_j = 0 keeps the entry; l_j >= l0_j > 0 shifts it.
        if sparse_get(&e.l0, j) == 0 {
            stays()
        } else {
            moved()
        }
    } else if sparse_get(&e.k0, j) < fm.k(j) {
        stays()
    } else {
        moved()
    }
}

/// `{f, S}` for a structured theta-0 `f`, propagating ledgers through the D-map.
///
/// For theta = 1 the factored coefficient is propagated instead.
pub fn poisson_with_generator(f: &Polynomial, s: &Polynomial, max_degree: Option<u32>) -> Result<Polynomial> {
    check_lattices(f, s)?;
    let form = SymplecticForm::of(&f.lattice);
    if form.theta == 1 && !f.has_ledgers() {
        return poisson_truncated(f, s, form, max_degree);
    }
    if !f.has_ledgers() {
        return Err(BracketError::MissingLedger);
    }
    let idx = ModeIndex::new(s);
    let mut acc: BTreeMap<MultiIndexPair, Acc> = BTreeMap::new();
    for (fm, fc) in f.terms() {
        let ledger = fc.ledger.as_ref().expect("checked above");
        for_each_contribution(form, fm, &idx, max_degree, |c, gm| {
            let v = c.weight * fc.scalar;
            let i2 = gm.momentum();
            let slot = acc.entry(c.mono).or_default();
            slot.sum += v;
            slot.mass += v.norm();
            for e in ledger {
                let key = d_map(e, fm, gm, c.j, c.first_half, i2);
                *slot.ledger.entry(key).or_default() += e.inner * c.weight;
            }
        });
    }
    Ok(finish(f.lattice, acc, true, false))
}

/// `{f, ||u||_p^2}` computed termwise as `i sum_j sgn^theta(j) (l_j - k_j) <j>^{2p}`.
pub fn bracket_with_sobolev_sq(f: &Polynomial, p: f64, form: SymplecticForm) -> Polynomial {
    let mut out = Polynomial::zero(f.lattice);
    for (m, c) in f.terms() {
        let w: f64 = m
            .entries()
            .iter()
            .map(|&(j, a, b)| form.sgn(j) * (a as f64 - b as f64) * bracket_j(j).powf(2.0 * p))
            .sum();
        if w != 0.0 {
            out.accumulate(m.clone(), Coefficient::scalar(c.scalar * I * w));
        }
    }
    out.structure_lost = f.is_structured();
    out
}

/// `||u||_p^2 = sum_j <j>^{2p} |u_j|^2` as a polynomial.
pub fn sobolev_polynomial(lattice: LatticeConfig, p: f64) -> Polynomial {
    let mut out = Polynomial::zero(lattice);
    for j in lattice.modes() {
        out.accumulate(
            MultiIndexPair::new(&[(j, 1)], &[(j, 1)]),
            Coefficient::scalar(Complex64::new(bracket_j(j).powf(2.0 * p), 0.0)),
        );
    }
    out
}

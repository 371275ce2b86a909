use poly_core::{bracket_j, semi_bound_check, LatticeConfig, SemiBoundReport, SparseExp, State};
use serde::Serialize;

use crate::error::Result;
use crate::hamiltonian::Hamiltonian;

#[derive(Debug, Clone, Serialize)]
pub struct ConjugationFailure {
    pub l: SparseExp,
    pub k: SparseExp,
    pub momentum: i64,
    pub mismatch: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StructureReport {
    pub theta: u8,
    pub terms: usize,
    pub conjugation_failures: Vec<ConjugationFailure>,
    /// Ledger entries without a conjugate partner entry (theta 0 only).
    pub ledger_failures: usize,
    pub semi_bound: Option<SemiBoundReport>,
    pub unstructured: bool,
    pub passed: bool,
}

/// Conjugation law plus the semi-bound `sum |f^{i(...)}| max(<i0>,<i0-2i>) <= C^{t-2} <i>^{-beta}`.
pub fn verify_structure(h: &Hamiltonian, beta: f64, c: f64, tol: f64) -> Result<StructureReport> {
    let p = &h.p;
    let conjugation_failures: Vec<ConjugationFailure> = p
        .conj_symmetry_violations(tol)
        .into_iter()
        .map(|v| ConjugationFailure { l: v.mono.l_sparse(), k: v.mono.k_sparse(), momentum: v.momentum, mismatch: v.mismatch })
        .collect();
    let unstructured = !p.is_empty() && !p.is_structured();
    let ledger_failures = if h.theta() == 0 && p.has_ledgers() { p.ledger_conjugation_violations(tol)? } else { 0 };
    let semi_bound = if unstructured { None } else { Some(semi_bound_check(p, beta, c)?) };
    let passed = conjugation_failures.is_empty()
        && ledger_failures == 0
        && !unstructured
        && semi_bound.as_ref().is_none_or(SemiBoundReport::passed);
    Ok(StructureReport { theta: h.theta(), terms: p.len(), conjugation_failures, ledger_failures, semi_bound, unstructured, passed })
}

/// `||psi||_{H^{p+1/2}}` for `psi_j = |j|^{1/2} u_j`.
pub fn psi_norm(u: &State, p: f64) -> f64 {
    u.lattice
        .modes()
        .iter()
        .zip(&u.u)
        .map(|(&j, z)| bracket_j(j).powf(2.0 * p + 1.0) * (j.abs() as f64) * z.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Sharpest `(C1, C2)` with `C1 ||u||_p <= ||psi||_{H^{p+1/2}} <= C2 ||u||_p` on the lattice.
pub fn qaz_constants(lattice: LatticeConfig, p: f64) -> (f64, f64) {
    let ratios = lattice
        .modes()
        .into_iter()
        .filter(|&j| j != 0)
        .map(|j| (bracket_j(j).powf(2.0 * p + 1.0) * j.abs() as f64 / bracket_j(j).powf(2.0 * p)).sqrt());
    ratios.fold((f64::INFINITY, 0.0), |(lo, hi), r| (lo.min(r), hi.max(r)))
}

use std::collections::HashMap;
use std::f64::consts::PI;

use poly_core::{Coefficient, FrequencyVector, LatticeConfig, LedgerEntry, MultiIndexPair, Polynomial, SparseExp};
use serde::{Deserialize, Serialize};
use spectrum::{frequencies, Potential};

use crate::error::{FrontendError, Result};
use crate::spec::NonlinearitySpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Equation {
    TypeOne,
    TypeTwo,
}

impl Equation {
    pub fn theta(self) -> u8 {
        match self {
            Equation::TypeOne => 0,
            Equation::TypeTwo => 1,
        }
    }
}

/// Bookkeeping from the Galerkin expansion.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BuildReport {
    /// Distinct `(a, b, kappa)` summands of `F`.
    pub f_monomials: usize,
    /// Summands with `a + b < 3`, which only feed quadratic or lower terms.
    pub low_degree_dropped: usize,
    /// Summands with `a + b >= 3` that produced no monomial on the lattice.
    pub empty_on_lattice: Vec<(u32, u32, i32)>,
    /// Monomials whose linear-form coefficient vanished identically.
    pub zero_coefficients: usize,
    pub p_terms: usize,
}

impl BuildReport {
    pub fn dropped(&self) -> usize {
        self.low_degree_dropped + self.empty_on_lattice.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    pub equation: Equation,
    pub h0: FrequencyVector,
    pub p: Polynomial,
    pub report: BuildReport,
}

impl Hamiltonian {
    pub fn theta(&self) -> u8 {
        self.equation.theta()
    }

    pub fn lattice(&self) -> LatticeConfig {
        self.h0.lattice
    }

    /// `H0 + P` as one polynomial.
    pub fn total(&self) -> Result<Polynomial> {
        Ok(self.h0.h0_polynomial().add(&self.p)?)
    }
}

/// All multisets of `size` lattice modes: `(exponents, sum of modes, size!/l!)`.
fn multisets(modes: &[i32], size: u32) -> Vec<(SparseExp, i64, f64)> {
    fn rec(modes: &[i32], start: usize, left: u32, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..modes.len() {
            cur.push(modes[i]);
            rec(modes, i, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut raw = Vec::new();
    rec(modes, 0, size, &mut Vec::new(), &mut raw);
    let fact = |n: u32| (1..=n).map(f64::from).product::<f64>();
    raw.into_iter()
        .map(|picked| {
            let mut exps: SparseExp = Vec::new();
            for j in &picked {
                match exps.last_mut() {
                    Some((last, e)) if last == j => *e += 1,
                    _ => exps.push((*j, 1)),
                }
            }
            let total: i64 = picked.iter().map(|&j| j as i64).sum();
            let weight = fact(size) / exps.iter().map(|&(_, e)| fact(e)).product::<f64>();
            (exps, total, weight)
        })
        .collect()
}

/// Visits every `(l, k)` with `|l| = a`, `|k| = b` and `M(l,k) = -kappa`, with the multinomial weight.
fn expand(modes: &[i32], a: u32, b: u32, kappa: i32, mut visit: impl FnMut(&SparseExp, i64, &SparseExp, f64)) -> usize {
    let ls = multisets(modes, a);
    let mut ks: HashMap<i64, Vec<(SparseExp, f64)>> = HashMap::new();
    for (k, total, w) in multisets(modes, b) {
        ks.entry(total).or_default().push((k, w));
    }
    let mut count = 0;
    for (l, lsum, wl) in &ls {
        if let Some(list) = ks.get(&(lsum + kappa as i64)) {
            for (k, wk) in list {
                visit(l, *lsum, k, wl * wk);
                count += 1;
            }
        }
    }
    count
}

fn check_potential(pot: &Potential, theta: u8, j_max: i32) -> Result<()> {
    if pot.theta != theta {
        return Err(FrontendError::PotentialMismatch(format!("expected theta {theta}, got {}", pot.theta)));
    }
    if pot.j_max != j_max {
        return Err(FrontendError::PotentialMismatch(format!("potential has J = {}, requested J = {j_max}", pot.j_max)));
    }
    pot.validate()?;
    Ok(())
}

fn build(f: &NonlinearitySpec, pot: &Potential, j_max: i32, equation: Equation) -> Result<Hamiltonian> {
    f.validate()?;
    let theta = equation.theta();
    check_potential(pot, theta, j_max)?;
    let h0 = frequencies(pot)?;
    let lattice = h0.lattice;
    let modes = lattice.modes();
    let mut p = Polynomial::zero(lattice);
    let mut report = BuildReport::default();
    let mons = f.monomials();
    report.f_monomials = mons.len();
    for (&(a, b, kappa), &c) in &mons {
        let r = a + b;
        if r < 3 {
            report.low_degree_dropped += 1;
            continue;
        }
        let norm = c * (2.0 * PI).powf(1.0 - r as f64 / 2.0);
        let mut zeros = 0;
        let mut terms = Vec::new();
        let produced = expand(&modes, a, b, kappa, |l, _lsum, k, w| {
            let mi = MultiIndexPair::new(l, k);
            let coef = match equation {
                Equation::TypeOne => {
                    let e = LedgerEntry { l0: l.clone(), k0: vec![], i0: -(kappa as i64), inner: -norm * w };
                    if e.linear_form() == 0.0 {
                        zeros += 1;
                        return;
                    }
                    Coefficient::from_ledger(vec![e])
                }
                Equation::TypeTwo => Coefficient::from_tilde(norm * w, &mi),
            };
            terms.push((mi, coef));
        });
        if produced == 0 {
            report.empty_on_lattice.push((a, b, kappa));
        }
        report.zero_coefficients += zeros;
        for (mi, coef) in terms {
            p.add_term(mi, coef)?;
        }
    }
    p.canonicalize_ledgers();
    report.p_terms = p.len();
    Ok(Hamiltonian { equation, h0, p, report })
}

/// Type-I equation: `P = int i(1/2 F_x + F_psi psi_x) dx` with `psi = sum u_j e^{ijx}/sqrt(2 pi)`.
///
/// Each monomial carries one ledger entry `(l, 0, M(l,k))` weighted by `M(l,0) - M(l,k)/2`.
pub fn build_type1(f: &NonlinearitySpec, pot: &Potential, j_max: i32) -> Result<Hamiltonian> {
    build(f, pot, j_max, Equation::TypeOne)
}

/// Type-II equation after `u_j = psi_j / |j|^{1/2}`: `P = int F dx` with factored
/// coefficients `tilde * prod |t|^{(l_t + k_t)/2}`.
pub fn build_type2(f: &NonlinearitySpec, pot: &Potential, j_max: i32) -> Result<Hamiltonian> {
    build(f, pot, j_max, Equation::TypeTwo)
}

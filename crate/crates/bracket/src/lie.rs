use poly_core::{Complex64, Polynomial};

use crate::error::{BracketError, Result};
use crate::poisson::{poisson_truncated, poisson_with_generator, SymplecticForm};

fn bracket_step(f: &Polynomial, s: &Polynomial, form: SymplecticForm, max_degree: u32) -> Result<Polynomial> {
    let gain = s.min_degree().unwrap_or(2).saturating_sub(2);
    let f = f.filter(|m, _| m.degree() + gain <= max_degree);
    if f.is_empty() || s.is_empty() {
        return Ok(Polynomial::zero(f.lattice));
    }
    if f.has_ledgers() {
        poisson_with_generator(&f, s, Some(max_degree))
    } else {
        poisson_truncated(&f, s, form, Some(max_degree))
    }
}

/// `sum_nu f_(nu)` with `f_(0) = f`, `f_(nu) = {f_(nu-1), S} / nu`, dropping degrees above `max_degree`.
///
/// This equals `f` composed with the time `-1` flow of `X_S`.
pub fn lie_series(f: &Polynomial, s: &Polynomial, form: SymplecticForm, max_degree: u32) -> Result<Polynomial> {
    if s.min_degree().is_some_and(|d| d <= 2) {
        return Err(BracketError::NonAscendingGenerator);
    }
    let mut total = f.filter(|m, _| m.degree() <= max_degree);
    let mut term = total.clone();
    let mut nu = 1.0;
    while !term.is_empty() && !s.is_empty() {
        term = bracket_step(&term, s, form, max_degree)?.scale(Complex64::new(1.0 / nu, 0.0));
        total = total.add(&term)?;
        nu += 1.0;
    }
    total.canonicalize_ledgers();
    Ok(total)
}

/// Transforms a quadratic `H0` whose first bracket `{H0, S}` is already known.
///
/// Returns `sum_{nu>=1} (H0)_(nu)` with `(H0)_(1) = first` and
/// `(H0)_(nu) = {(H0)_(nu-1), S} / nu`.
pub fn lie_series_from_first(first: &Polynomial, s: &Polynomial, form: SymplecticForm, max_degree: u32) -> Result<Polynomial> {
    if s.min_degree().is_some_and(|d| d <= 2) {
        return Err(BracketError::NonAscendingGenerator);
    }
    let mut total = first.filter(|m, _| m.degree() <= max_degree);
    let mut term = total.clone();
    let mut nu = 2.0;
    while !term.is_empty() && !s.is_empty() {
        term = bracket_step(&term, s, form, max_degree)?.scale(Complex64::new(1.0 / nu, 0.0));
        total = total.add(&term)?;
        nu += 1.0;
    }
    total.canonicalize_ledgers();
    Ok(total)
}

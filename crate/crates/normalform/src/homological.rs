use bracket::{poisson, SymplecticForm};
use poly_core::{Coefficient, Complex64, FrequencyVector, Polynomial};

use crate::error::{NormalFormError, Result};
use crate::resonance::{is_resonant_term, NormalFormParams};

/// Solves `{H0, S} + Z = g` for a truncated homogeneous `g`.
///
/// Nonresonant terms give `S = -g / (i <omega, I_theta(l-k)>)`; resonant terms
/// are collected in `Z`. Returns `(S, Z)`.
pub fn solve_homological(omega: &FrequencyVector, g: &Polynomial, params: &NormalFormParams) -> Result<(Polynomial, Polynomial)> {
    let mut s = Polynomial::zero(g.lattice);
    let mut z = Polynomial::zero(g.lattice);
    z.structure_lost = g.structure_lost;
    let i = Complex64::new(0.0, 1.0);
    let factored = g.lattice.theta == 1 && g.is_structured();
    for (m, c) in g.terms() {
        if is_resonant_term(omega, m, params) {
            z.accumulate(m.clone(), c.clone());
            continue;
        }
        let d = omega.small_divisor(m);
        if d.abs() < 1e-300 {
            return Err(NormalFormError::SmallDivisorUnderflow);
        }
        let v = -c.scalar / (i * d);
        let mut coef = Coefficient::scalar(v);
        if factored {
            coef.tilde = Some(v / m.bracket_weight());
        }
        s.accumulate(m.clone(), coef);
    }
    Ok((s, z))
}

/// Largest termwise `|{H0,S} + Z - g| / (1 + |g|)`.
pub fn homological_residual(omega: &FrequencyVector, g: &Polynomial, s: &Polynomial, z: &Polynomial) -> Result<f64> {
    let form = SymplecticForm::of(&g.lattice);
    let lhs = poisson(&omega.h0_polynomial(), s, form)?.add(z)?;
    let mut worst: f64 = 0.0;
    for (m, c) in lhs.terms() {
        worst = worst.max((c.scalar - g.scalar_of(m)).norm() / (1.0 + g.scalar_of(m).norm()));
    }
    for (m, c) in g.terms() {
        if lhs.get(m).is_none() {
            worst = worst.max(c.scalar.norm() / (1.0 + c.scalar.norm()));
        }
    }
    Ok(worst)
}

//! Time integration of polynomial Hamiltonian flows on the real slice.

use poly_core::{Complex64, Polynomial, State};

use crate::error::{BracketError, Result};
use crate::field::velocity;
use crate::poisson::SymplecticForm;

/// Settings for the implicit midpoint fixed-point iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MidpointSettings {
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for MidpointSettings {
    fn default() -> Self {
        MidpointSettings { tol: 1e-15, max_iters: 100 }
    }
}

fn sup_norm(v: &[Complex64]) -> f64 {
    v.iter().fold(0.0, |m, z| m.max(z.norm()))
}

/// One implicit midpoint step `u1 = u0 + h F((u0 + u1)/2)` for a generic field.
pub fn midpoint_step(
    field: &dyn Fn(&[Complex64]) -> Vec<Complex64>,
    u0: &[Complex64],
    h: f64,
    settings: MidpointSettings,
) -> Result<Vec<Complex64>> {
    let mut mid: Vec<Complex64> = u0.to_vec();
    let scale = 1.0 + sup_norm(u0);
    for _ in 0..settings.max_iters {
        let f = field(&mid);
        let next: Vec<Complex64> = u0.iter().zip(&f).map(|(a, d)| a + d * (0.5 * h)).collect();
        let delta = next.iter().zip(&mid).fold(0.0f64, |m, (a, b)| m.max((a - b).norm()));
        mid = next;
        if delta <= settings.tol * scale {
            return Ok(mid.iter().zip(u0).map(|(m, a)| m * 2.0 - a).collect());
        }
    }
    Err(BracketError::NoConvergence(settings.max_iters))
}

/// Integrates the flow of `X_f` for signed time `time` with `steps` midpoint steps.
///
/// Fails with [`BracketError::OutOfDomain`] when the sup norm doubles.
pub fn polynomial_flow(f: &Polynomial, form: SymplecticForm, s: &State, time: f64, steps: usize, settings: MidpointSettings) -> Result<State> {
    if f.is_empty() || time == 0.0 {
        return Ok(s.clone());
    }
    let h = time / steps as f64;
    let start = sup_norm(&s.u);
    let field = |u: &[Complex64]| velocity(f, form, u);
    let mut u = s.u.clone();
    for _ in 0..steps {
        u = midpoint_step(&field, &u, h, settings)?;
        if start > 0.0 && sup_norm(&u) > 2.0 * start {
            return Err(BracketError::OutOfDomain);
        }
    }
    Ok(State { lattice: s.lattice, u })
}

/// Classical RK4 reference integration of `X_f`.
pub fn polynomial_flow_rk4(f: &Polynomial, form: SymplecticForm, s: &State, time: f64, steps: usize) -> State {
    let h = time / steps as f64;
    let mut u = s.u.clone();
    let add = |a: &[Complex64], b: &[Complex64], c: f64| -> Vec<Complex64> { a.iter().zip(b).map(|(x, y)| x + y * c).collect() };
    for _ in 0..steps {
        let k1 = velocity(f, form, &u);
        let k2 = velocity(f, form, &add(&u, &k1, 0.5 * h));
        let k3 = velocity(f, form, &add(&u, &k2, 0.5 * h));
        let k4 = velocity(f, form, &add(&u, &k3, h));
        for i in 0..u.len() {
            u[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0);
        }
    }
    State { lattice: s.lattice, u }
}

use poly_core::{bracket_j, Complex64, Polynomial, State};

use crate::poisson::SymplecticForm;

/// Hamiltonian vector field `X_f = J_theta grad f` at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    pub du: Vec<Complex64>,
    pub dubar: Vec<Complex64>,
}

impl TangentVector {
    /// `sqrt(||du||_q^2 + ||dubar||_q^2)` over the lattice modes.
    pub fn norm(&self, modes: &[i32], q: f64) -> f64 {
        modes
            .iter()
            .zip(self.du.iter().zip(&self.dubar))
            .map(|(&j, (a, b))| bracket_j(j).powf(2.0 * q) * (a.norm_sqr() + b.norm_sqr()))
            .sum::<f64>()
            .sqrt()
    }
}

/// `du_j = -i sgn^theta(j) df/dubar_j`, `dubar_j = i sgn^theta(j) df/du_j`.
pub fn hamiltonian_vector_field(f: &Polynomial, form: SymplecticForm, s: &State) -> TangentVector {
    let (gu, gub) = f.gradient(s);
    let modes = f.lattice.modes();
    let i = Complex64::new(0.0, 1.0);
    let du = modes.iter().zip(&gub).map(|(&j, d)| -i * form.sgn(j) * d).collect();
    let dubar = modes.iter().zip(&gu).map(|(&j, d)| i * form.sgn(j) * d).collect();
    TangentVector { du, dubar }
}

/// The `u` component of `X_f` only; on the real slice `dubar = conj(du)`.
pub fn velocity(f: &Polynomial, form: SymplecticForm, u: &[Complex64]) -> Vec<Complex64> {
    let ubar: Vec<Complex64> = u.iter().map(|z| z.conj()).collect();
    let (_, gub) = f.gradient_general(u, &ubar);
    let i = Complex64::new(0.0, 1.0);
    f.lattice.modes().iter().zip(&gub).map(|(&j, d)| -i * form.sgn(j) * d).collect()
}

use bracket::{polynomial_flow, MidpointSettings, SymplecticForm};
use poly_core::{Polynomial, State};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Integration settings for generator flows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformSettings {
    pub step: f64,
    pub midpoint: MidpointSettings,
}

impl Default for TransformSettings {
    fn default() -> Self {
        TransformSettings { step: 1e-3, midpoint: MidpointSettings::default() }
    }
}

/// Applies `T = Phi^{S_0}_1 o ... o Phi^{S_r*}_1` (forward) or its inverse.
pub fn transform_state(generators: &[Polynomial], s: &State, direction: Direction, settings: TransformSettings) -> Result<State> {
    let form = SymplecticForm::of(&s.lattice);
    let steps = (1.0 / settings.step).round().max(1.0) as usize;
    let mut x = s.clone();
    match direction {
        Direction::Forward => {
            for g in generators.iter().rev() {
                x = polynomial_flow(g, form, &x, 1.0, steps, settings.midpoint)?;
            }
        }
        Direction::Inverse => {
            for g in generators {
                x = polynomial_flow(g, form, &x, -1.0, steps, settings.midpoint)?;
            }
        }
    }
    Ok(x)
}

/// `||T(s) - s||_p / ||s||_p^{2 - 1/(2(r*+1)^2)}`, the near-identity diagnostic.
pub fn near_identity_ratio(generators: &[Polynomial], s: &State, p: f64, r_star: u32, settings: TransformSettings) -> Result<f64> {
    let t = transform_state(generators, s, Direction::Forward, settings)?;
    let r = (r_star + 1) as f64;
    Ok(t.sub(s).sobolev_norm(p) / s.sobolev_norm(p).powf(2.0 - 1.0 / (2.0 * r * r)))
}

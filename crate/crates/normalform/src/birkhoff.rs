//! The iterative Birkhoff driver.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use bracket::{lie_series, lie_series_from_first, SymplecticForm};
use poly_core::{gamma_gt2, gamma_le2, Complex64, FrequencyVector, Polynomial};

use crate::error::{NormalFormError, Result};
use crate::homological::{homological_residual, solve_homological};
use crate::resonance::NormalFormParams;

/// Per-stage bookkeeping.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct StageDiagnostics {
    pub stage: usize,
    pub degree: u32,
    pub residual: f64,
    pub g_terms: usize,
    pub z_terms: usize,
    pub rn_terms: usize,
    pub s_terms: usize,
    pub hamiltonian_terms: usize,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Diagnostics {
    pub stages: Vec<StageDiagnostics>,
    /// `max |K_{<= r*+3} - (Z + R_N)|` after the last stage.
    pub split_mismatch: f64,
    /// Whether theta-0 ledgers survived every stage.
    pub ledgers_intact: bool,
    pub params: NormalFormParams,
}

/// `H o T = H0 + Z + R_N + R_T` together with the generators `S^(0..r*)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalFormResult {
    pub omega: FrequencyVector,
    pub z: Polynomial,
    pub r_n: Polynomial,
    pub r_t: Polynomial,
    pub generators: Vec<Polynomial>,
    pub diagnostics: Diagnostics,
}

impl NormalFormResult {
    /// `H0 + Z + R_N + R_T` as one polynomial.
    pub fn transformed_hamiltonian(&self) -> Result<Polynomial> {
        Ok(self.omega.h0_polynomial().add(&self.z)?.add(&self.r_n)?.add(&self.r_t)?)
    }

    pub fn max_residual(&self) -> f64 {
        self.diagnostics.stages.iter().map(|s| s.residual).fold(0.0, f64::max)
    }
}

fn stage_error(stage: usize) -> impl Fn(NormalFormError) -> NormalFormError {
    move |e| NormalFormError::Stage { stage, source: Box::new(e) }
}

/// Runs stages `r = 0..=r*`, stage `r` normalizing degree `r + 3`.
///
/// The working Hamiltonian is kept up to degree `rt_degree`; higher-degree
/// input terms go straight to `R_T`.
pub fn birkhoff_iterate(omega: &FrequencyVector, p: &Polynomial, params: &NormalFormParams) -> Result<NormalFormResult> {
    params.validate(omega.lattice.j_max)?;
    if omega.lattice != p.lattice {
        return Err(NormalFormError::Poly(poly_core::PolyError::LatticeMismatch));
    }
    let form = SymplecticForm::of(&p.lattice);
    let top = params.top_degree();
    let keep = params.rt_degree();
    let lattice = p.lattice;
    let mut work = p.filter(|m, _| m.degree() >= 3 && m.degree() <= keep);
    let rt_raw = p.filter(|m, _| m.degree() > keep);
    let mut z = Polynomial::zero(lattice);
    let mut r_n = Polynomial::zero(lattice);
    let mut generators = Vec::new();
    let mut stages = Vec::new();
    let mut ledgers_intact = work.is_empty() || work.has_ledgers();

    for (stage, degree) in (3..=top).enumerate() {
        let started = Instant::now();
        let wrap = stage_error(stage);
        let g = work.homogeneous(degree);
        let g_le = gamma_le2(&g, params.n);
        let g_gt = gamma_gt2(&g, params.n);
        let (s, zd) = solve_homological(omega, &g_le, params).map_err(&wrap)?;
        let residual = homological_residual(omega, &g_le, &s, &zd).map_err(&wrap)?;
        if !s.is_empty() {
            let neg = s.scale(Complex64::new(-1.0, 0.0));
            let moved = lie_series(&work, &neg, form, keep).map_err(|e| wrap(e.into()))?;
            let first = zd.sub(&g_le).map_err(|e| wrap(e.into()))?;
            let h0_part = lie_series_from_first(&first, &neg, form, keep).map_err(|e| wrap(e.into()))?;
            work = moved.add(&h0_part).map_err(|e| wrap(e.into()))?;
        }
        ledgers_intact &= work.is_empty() || work.has_ledgers();
        stages.push(StageDiagnostics {
            stage,
            degree,
            residual,
            g_terms: g.len(),
            z_terms: zd.len(),
            rn_terms: g_gt.len(),
            s_terms: s.len(),
            hamiltonian_terms: work.len(),
            seconds: started.elapsed().as_secs_f64(),
        });
        z = z.add(&zd)?;
        r_n = r_n.add(&g_gt)?;
        generators.push(s);
    }

    let low = work.filter(|m, _| m.degree() <= top);
    let split_mismatch = low.sub(&z.add(&r_n)?)?.max_coefficient();
    let r_t = work.filter(|m, _| m.degree() > top).add(&rt_raw)?;
    Ok(NormalFormResult {
        omega: omega.clone(),
        z,
        r_n,
        r_t,
        generators,
        diagnostics: Diagnostics { stages, split_mismatch, ledgers_intact, params: *params },
    })
}

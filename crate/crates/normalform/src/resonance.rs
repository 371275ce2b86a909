use serde::{Deserialize, Serialize};

use poly_core::{FrequencyVector, MultiIndexPair, Polynomial};

use crate::error::{NormalFormError, Result};

/// Parameters `(gamma, alpha, N, r*, p)` of the normal-form construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalFormParams {
    pub gamma: f64,
    pub alpha: f64,
    #[serde(rename = "N")]
    pub n: i32,
    pub r_star: u32,
    pub p: f64,
    /// Highest degree kept in `R_T`; defaults to `r* + 4`.
    #[serde(default)]
    pub rt_degree: Option<u32>,
}

/// The advisory `N` window for a given radius `R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NWindow {
    pub radius: f64,
    pub lower: f64,
    pub upper: f64,
    pub inside: bool,
}

impl NormalFormParams {
    pub fn validate(&self, j_max: i32) -> Result<()> {
        let bad = |m: String| Err(NormalFormError::InvalidParams(m));
        if !(self.gamma > 0.0) {
            return bad(format!("gamma must be > 0, got {}", self.gamma));
        }
        if !(self.alpha > 1.0) {
            return bad(format!("alpha must be > 1, got {}", self.alpha));
        }
        if self.n < 1 || self.n > j_max {
            return bad(format!("N must lie in [1, J={j_max}], got {}", self.n));
        }
        if self.r_star < 1 {
            return bad("r_star must be >= 1".into());
        }
        if self.rt_degree.is_some_and(|d| d < self.r_star + 4) {
            return bad("rt_degree must be >= r_star + 4".into());
        }
        Ok(())
    }

    pub fn top_degree(&self) -> u32 {
        self.r_star + 3
    }

    pub fn rt_degree(&self) -> u32 {
        self.rt_degree.unwrap_or(self.r_star + 4)
    }

    /// `(R^{r*-2} gamma^{r*+1})^{-1/(p-2-2 alpha (r*+1))} <= N <= (gamma R^{-1/((r*+1)(r*+2))})^{1/(2 alpha)}`.
    pub fn n_window(&self, radius: f64) -> NWindow {
        let r = self.r_star as f64;
        let lower = (radius.powf(r - 2.0) * self.gamma.powf(r + 1.0)).powf(-1.0 / (self.p - 2.0 - 2.0 * self.alpha * (r + 1.0)));
        let upper = (self.gamma * radius.powf(-1.0 / ((r + 1.0) * (r + 2.0)))).powf(1.0 / (2.0 * self.alpha));
        let n = self.n as f64;
        NWindow { radius, lower, upper, inside: lower <= n && n <= upper }
    }
}

/// `<omega, I_theta(l - k)>`.
pub fn small_divisor(omega: &FrequencyVector, mi: &MultiIndexPair) -> f64 {
    omega.small_divisor(mi)
}

/// `max(N, |j|)` over the support of `(l,k)`.
pub fn m_lk(mi: &MultiIndexPair, n: i32) -> i32 {
    mi.max_abs_mode().map_or(n, |m| m.max(n))
}

/// Threshold `gamma M_{lk} / N^alpha`.
pub fn resonance_threshold(mi: &MultiIndexPair, params: &NormalFormParams) -> f64 {
    params.gamma * m_lk(mi, params.n) as f64 / (params.n as f64).powf(params.alpha)
}

/// `|divisor| <= gamma M_{lk} / N^alpha`; the boundary counts as resonant.
pub fn is_resonant_term(omega: &FrequencyVector, mi: &MultiIndexPair, params: &NormalFormParams) -> bool {
    small_divisor(omega, mi).abs() <= resonance_threshold(mi, params)
}

/// Splits `f` into `(resonant, nonresonant)` parts. Structure is inherited.
pub fn nf_projector(f: &Polynomial, omega: &FrequencyVector, params: &NormalFormParams) -> (Polynomial, Polynomial) {
    (
        f.filter(|m, _| is_resonant_term(omega, m, params)),
        f.filter(|m, _| !is_resonant_term(omega, m, params)),
    )
}

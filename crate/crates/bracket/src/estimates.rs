//! Closed-form upper bounds for `||X_f||_{p-1}` and `|{f, ||u||_p^2}|` of a
//! homogeneous degree-`r` polynomial semi-bounded by `C`.

use poly_core::{bracket_j, LatticeConfig, State};

/// `c = sqrt(sum_j <j>^{-2})` over the lattice.
pub fn lattice_c(lattice: &LatticeConfig) -> f64 {
    lattice.modes().iter().map(|&j| bracket_j(j).powi(-2)).sum::<f64>().sqrt()
}

/// `16 C^{r-2} r^{p+1} c^{r-1} ||u||_2^{r-2} ||u||_p`.
pub fn vector_field_bound(c_f: f64, r: u32, p: f64, s: &State) -> f64 {
    let rf = r as f64;
    16.0 * c_f.powi(r as i32 - 2) * rf.powf(p + 1.0) * lattice_c(&s.lattice).powi(r as i32 - 1) * s.sobolev_norm(2.0).powi(r as i32 - 2) * s.sobolev_norm(p)
}

/// `C^{r-2} 2^{p+1} p r^{p-1} c^{r-1} ||u||_p^2 ||u||_2^{r-2}`.
pub fn sobolev_bracket_bound(c_f: f64, r: u32, p: f64, s: &State) -> f64 {
    let rf = r as f64;
    c_f.powi(r as i32 - 2) * 2f64.powf(p + 1.0) * p * rf.powf(p - 1.0) * lattice_c(&s.lattice).powi(r as i32 - 1) * s.sobolev_norm_sq(p) * s.sobolev_norm(2.0).powi(r as i32 - 2)
}

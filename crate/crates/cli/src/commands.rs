//! One function per subcommand. Each writes its artifacts into an output directory.

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use bracket::SymplecticForm;
use dynamics::{drift_scaling, initial_state, integrate, stability_time, DriftScalingConfig, DriftScalingReport, HamiltonianSystem, StabilityOutcome};
use normalform::{birkhoff_iterate, io::read_result, io::write_result, NormalFormResult};
use pde_frontend::io::{read_hamiltonian, write_hamiltonian};
use pde_frontend::{build_type1, build_type2, verify_structure, Equation, Hamiltonian, StructureReport};
use poly_core::{Polynomial, State};
use spectrum::{critical_gammas, doubling_ratio, estimate_from_critical, frequencies, resonance_scan, sample_potential, MeasureConfig, MeasureEstimate, Potential, ResonanceParams};

use crate::config::ExperimentConfig;
use crate::error::{runtime, CliError, Result};
use crate::output::{header, write_csv, write_json};

/// Successful outcome of a command; `passed = false` maps to exit code 3.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub passed: bool,
    pub summary: String,
}

impl Outcome {
    fn ok(summary: impl Into<String>) -> Self {
        Outcome { passed: true, summary: summary.into() }
    }
}

pub fn potential(cfg: &ExperimentConfig) -> Result<Potential> {
    let (theta, m, j) = (cfg.lattice.theta, cfg.potential.m, cfg.lattice.j_max);
    Ok(if cfg.potential.zero { Potential::zero(theta, m, j)? } else { sample_potential(theta, m, j, cfg.potential.seed)? })
}

pub fn build_hamiltonian(cfg: &ExperimentConfig) -> Result<Hamiltonian> {
    let pot = potential(cfg)?;
    Ok(match cfg.equation() {
        Equation::TypeOne => build_type1(&cfg.nonlinearity, &pot, cfg.lattice.j_max)?,
        Equation::TypeTwo => build_type2(&cfg.nonlinearity, &pot, cfg.lattice.j_max)?,
    })
}

fn load_hamiltonian(cfg: &ExperimentConfig, dir: &Path) -> Result<Hamiltonian> {
    let h = read_hamiltonian(dir).map_err(|e| CliError::Runtime(format!("{}: {e}", dir.display())))?;
    if h.lattice() != cfg.lattice() {
        return Err(CliError::config("lattice", format!("does not match the Hamiltonian in {}", dir.display())));
    }
    Ok(h)
}

fn load_normal_form(cfg: &ExperimentConfig, dir: &Path) -> Result<NormalFormResult> {
    let nf = read_result(dir).map_err(|e| CliError::Runtime(format!("{}: {e}", dir.display())))?;
    if nf.omega.lattice != cfg.lattice() {
        return Err(CliError::config("lattice", format!("does not match the normal form in {}", dir.display())));
    }
    Ok(nf)
}

/// Structure report with `c` taken from the config or, when absent, the smallest passing constant.
pub fn structure_report(cfg: &ExperimentConfig, h: &Hamiltonian) -> Result<StructureReport> {
    let ex = cfg.experiment.as_ref();
    let beta = ex.map_or(0.0, |e| e.beta);
    let tol = 1e-12;
    let c = match ex.and_then(|e| e.c) {
        Some(c) => c,
        None => {
            let probe = verify_structure(h, beta, 1.0, tol)?;
            probe.semi_bound.map_or(1.0, |s| if s.minimal_c > 0.0 { s.minimal_c * (1.0 + 1e-9) } else { 1.0 })
        }
    };
    Ok(verify_structure(h, beta, c, tol)?)
}

pub fn cmd_build(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let hdr = header(cfg, "build");
    let h = build_hamiltonian(cfg)?;
    write_hamiltonian(out, &h, &hdr)?;
    let report = structure_report(cfg, &h)?;
    write_json(&out.join("structure_report.json"), &hdr, "structure", &report)?;
    println!("P: {} terms, {} F monomials, {} dropped", h.p.len(), h.report.f_monomials, h.report.dropped());
    println!("structure checks: {}", if report.passed { "passed" } else { "FAILED" });
    Ok(Outcome { passed: report.passed, summary: format!("{} terms", h.p.len()) })
}

pub fn cmd_normalform(cfg: &ExperimentConfig, hamiltonian: &Path, out: &Path) -> Result<Outcome> {
    let hdr = header(cfg, "normalform");
    let h = load_hamiltonian(cfg, hamiltonian)?;
    let params = cfg.nf_params()?;
    if let Some(eps) = cfg.experiment.as_ref().and_then(|e| e.epsilons.as_ref()).and_then(|v| v.first()) {
        let w = params.n_window(*eps);
        if !w.inside {
            eprintln!("warning: N = {} lies outside the window [{:.3e}, {:.3e}] for R = {eps}", params.n, w.lower, w.upper);
        }
    }
    let mut res = birkhoff_iterate(&h.h0, &h.p, &params)?;
    println!("{:>5} {:>6} {:>12} {:>8} {:>8} {:>8} {:>8} {:>10}", "stage", "degree", "residual", "g", "Z", "R_N", "S", "seconds");
    for s in &res.diagnostics.stages {
        println!(
            "{:>5} {:>6} {:>12.3e} {:>8} {:>8} {:>8} {:>8} {:>10.3}",
            s.stage, s.degree, s.residual, s.g_terms, s.z_terms, s.rn_terms, s.s_terms, s.seconds
        );
    }
    for s in &mut res.diagnostics.stages {
        s.seconds = 0.0;
    }
    write_result(out, &res, &hdr)?;
    let worst = res.max_residual();
    let tol = cfg.nf()?.residual_tol;
    let passed = worst <= tol;
    if !passed {
        eprintln!("homological residual {worst:e} exceeds {tol:e}");
    }
    Ok(Outcome { passed, summary: format!("max residual {worst:e}") })
}

pub fn cmd_scan(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let hdr = header(cfg, "scan");
    let nf = cfg.nf()?;
    let ex = cfg.experiment.as_ref();
    let r = ex.and_then(|e| e.r).unwrap_or(3);
    let budget = ex.map_or(spectrum::DEFAULT_BUDGET, |e| e.budget);
    let gamma = ex.and_then(|e| e.gammas.as_ref()).and_then(|g| g.first().copied()).unwrap_or(nf.gamma);
    let omega = frequencies(&potential(cfg)?)?;
    let report = resonance_scan(&omega, r, nf.n, ResonanceParams { gamma, alpha: nf.alpha }, budget)?;
    fs::create_dir_all(out)?;
    let mut csv = String::from("l,k,divisor,threshold\n");
    for v in &report.violations {
        csv.push_str(&format!("\"{:?}\",\"{:?}\",{:e},{:e}\n", v.l, v.k, v.divisor, v.threshold));
    }
    write_csv(&out.join("violations.csv"), &hdr, csv.as_bytes())?;
    write_json(&out.join("scan.json"), &hdr, "scan", &report)?;
    println!("{} candidates, {} violations", report.candidates, report.violations.len());
    Ok(Outcome::ok(format!("{} violations", report.violations.len())))
}

#[derive(Debug, Clone, Serialize)]
pub struct MeasureSeries {
    #[serde(rename = "N")]
    pub n: i32,
    pub estimates: Vec<MeasureEstimate>,
    pub doubling_ratio: Option<f64>,
    /// Least-squares fit `fraction = slope * gamma + intercept`.
    pub linear_slope: f64,
    pub linear_intercept: f64,
}

pub fn measure_series(cfg: &MeasureConfig, gammas: &[f64]) -> Result<MeasureSeries> {
    let critical = critical_gammas(cfg)?;
    let estimates: Vec<MeasureEstimate> = gammas.iter().map(|&g| estimate_from_critical(cfg, &critical, g)).collect();
    let fractions: Vec<f64> = estimates.iter().map(|e| e.fraction).collect();
    let (linear_slope, linear_intercept) =
        if gammas.len() >= 2 { dynamics::drift::least_squares(gammas, &fractions) } else { (f64::NAN, f64::NAN) };
    Ok(MeasureSeries { n: cfg.n, doubling_ratio: doubling_ratio(&estimates), estimates, linear_slope, linear_intercept })
}

pub fn cmd_measure(cfg: &ExperimentConfig, out: &Path) -> Result<Outcome> {
    let hdr = header(cfg, "measure");
    let nf = cfg.nf()?;
    let ex = cfg.experiment()?;
    let gammas = ex.gammas.clone().ok_or_else(|| CliError::config("experiment.gammas", "required for measure"))?;
    let samples = ex.samples.ok_or_else(|| CliError::config("experiment.samples", "required for measure"))?;
    let ns = ex.n_values.clone().unwrap_or_else(|| vec![nf.n]);
    let mut series = Vec::new();
    for &n in &ns {
        let mc = MeasureConfig {
            theta: cfg.lattice.theta,
            m: cfg.potential.m,
            r: ex.r.unwrap_or(3),
            n,
            alpha: nf.alpha,
            j_max: cfg.lattice.j_max,
            samples,
            seed: cfg.experiment_seed(),
            budget: ex.budget,
        };
        series.push(measure_series(&mc, &gammas)?);
    }
    fs::create_dir_all(out)?;
    let mut csv = String::from("N,gamma,samples,failures,fraction,ci_lo,ci_hi,lemma_bound,within_lemma_bound\n");
    for s in &series {
        for e in &s.estimates {
            csv.push_str(&format!(
                "{},{:e},{},{},{:e},{:e},{:e},{:e},{}\n",
                s.n, e.gamma, e.samples, e.failures, e.fraction, e.ci[0], e.ci[1], e.lemma_bound, e.within_lemma_bound
            ));
        }
        println!("N = {}: doubling ratio {:?}, linear slope {:e}", s.n, s.doubling_ratio, s.linear_slope);
    }
    write_csv(&out.join("measure.csv"), &hdr, csv.as_bytes())?;
    write_json(&out.join("measure.json"), &hdr, "measure", &series)?;
    Ok(Outcome::ok(format!("{} series", series.len())))
}

#[derive(Debug, Clone, Serialize)]
struct StabilityRow {
    epsilon: f64,
    outcome: StabilityOutcome,
}

pub fn cmd_simulate(cfg: &ExperimentConfig, hamiltonian: &Path, out: &Path) -> Result<Outcome> {
    let hdr = header(cfg, "simulate");
    let h = load_hamiltonian(cfg, hamiltonian)?;
    let sys = HamiltonianSystem::new(h.h0.clone(), h.p.clone())?;
    let (icfg, t_end) = cfg.integrator(&sys.omega)?;
    if let Some(msg) = icfg.stability_advisory(&sys.omega) {
        eprintln!("warning: {msg}");
    }
    let ex = cfg.experiment()?;
    let eps = ex.epsilons.clone().ok_or_else(|| CliError::config("experiment.epsilons", "required for simulate"))?;
    if eps.is_empty() {
        return Err(CliError::config("experiment.epsilons", "must not be empty"));
    }
    let p = cfg.norm_p();
    let seed = cfg.experiment_seed();
    fs::create_dir_all(out)?;
    let u0 = initial_state(sys.omega.lattice, p, eps[0], seed);
    let traj = integrate(&sys, &u0, &icfg, t_end, p)?;
    let mut body = Vec::new();
    traj.write_csv(&mut body, cfg.integrate_section()?.per_mode)?;
    write_csv(&out.join("trajectory.csv"), &hdr, &body)?;
    let rows: Vec<StabilityRow> = eps
        .par_iter()
        .map(|&e| stability_time(&sys, e, p, &icfg, t_end, ex.threshold_factor, seed).map(|outcome| StabilityRow { epsilon: e, outcome }))
        .collect::<std::result::Result<_, _>>()?;
    let mut csv = String::from("epsilon,outcome,t\n");
    for r in &rows {
        let (name, t) = match r.outcome {
            StabilityOutcome::Escaped { t } => ("escaped", t),
            StabilityOutcome::Survived { t_max } => ("survived", t_max),
        };
        csv.push_str(&format!("{:e},{name},{:e}\n", r.epsilon, t));
        println!("epsilon {:e}: {name} at t = {t}", r.epsilon);
    }
    write_csv(&out.join("stability.csv"), &hdr, csv.as_bytes())?;
    write_json(&out.join("stability.json"), &hdr, "stability", &rows)?;
    println!("max |H(t) - H(0)| = {:e}, halved steps {}", traj.max_energy_error(), traj.halved_steps);
    Ok(Outcome::ok(format!("{} stability runs", rows.len())))
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingSummary {
    pub original: DriftScalingReport,
    pub transformed: Option<DriftScalingReport>,
    /// Transformed minus original slope when both are fitted.
    pub separation: Option<f64>,
}

pub fn cmd_scaling(cfg: &ExperimentConfig, hamiltonian: &Path, normal_form: Option<&Path>, out: &Path) -> Result<Outcome> {
    let hdr = header(cfg, "scaling");
    let h = load_hamiltonian(cfg, hamiltonian)?;
    let ex = cfg.experiment()?;
    let ladder = ex.ladder.clone().ok_or_else(|| CliError::config("experiment.ladder", "required for scaling"))?;
    let dcfg = DriftScalingConfig { states: ex.samples.unwrap_or(64), seed: cfg.experiment_seed(), decay: ex.decay };
    let form = SymplecticForm::of(&h.lattice());
    let p = cfg.norm_p();
    let h0 = h.h0.h0_polynomial();
    let original = drift_scaling(&[&h0, &h.p], p, form, &ladder, &dcfg)?;
    let transformed = match normal_form {
        Some(dir) => {
            let nf = load_normal_form(cfg, dir)?;
            Some(drift_scaling(&[&h0, &nf.z, &nf.r_n, &nf.r_t], p, form, &ladder, &dcfg)?)
        }
        None => None,
    };
    fs::create_dir_all(out)?;
    let mut body = Vec::new();
    original.write_csv(&mut body)?;
    write_csv(&out.join("scaling_original.csv"), &hdr, &body)?;
    if let Some(t) = &transformed {
        let mut body = Vec::new();
        t.write_csv(&mut body)?;
        write_csv(&out.join("scaling_transformed.csv"), &hdr, &body)?;
    }
    let separation = transformed.as_ref().and_then(|t| Some(t.slope()? - original.slope()?));
    let describe = |r: &DriftScalingReport| r.slope().map_or("conserved".to_string(), |s| format!("{s:.4}"));
    println!("original drift slope: {}", describe(&original));
    if let Some(t) = &transformed {
        println!("transformed drift slope: {}", describe(t));
    }
    let summary = ScalingSummary { original, transformed, separation };
    write_json(&out.join("scaling.json"), &hdr, "scaling", &summary)?;
    Ok(Outcome::ok(describe(&summary.original)))
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub structure: StructureReport,
    /// Names of polynomials failing the conjugation symmetry check.
    pub asymmetric: Vec<String>,
    /// Largest `|Im H(s)| / max(1, |H(s)|)` over the random states.
    pub real_slice_max_imag: f64,
    pub states: usize,
    pub passed: bool,
}

pub const REAL_SLICE_TOL: f64 = 1e-12;
/// Relative conjugation tolerance for Hamiltonians built directly from `F`.
pub const CONJ_TOL_BUILT: f64 = 1e-12;
/// Relative conjugation tolerance for Lie-series outputs, whose small terms carry
/// rounding from much larger cancelling contributions.
pub const CONJ_TOL_TRANSFORMED: f64 = 1e-9;

/// Largest relative imaginary part of `f` over `states` random states of norm `radius`.
pub fn real_slice_imag(f: &Polynomial, p: f64, radius: f64, states: usize, seed: u64) -> f64 {
    (0..states)
        .map(|i| {
            let s = State::random(f.lattice, p, radius, 0.0, seed.wrapping_add(i as u64));
            let v = f.eval(&s);
            v.im.abs() / v.norm().max(1.0)
        })
        .fold(0.0, f64::max)
}

pub fn cmd_verify(cfg: &ExperimentConfig, hamiltonian: &Path, normal_form: Option<&Path>, out: &Path) -> Result<Outcome> {
    let hdr = header(cfg, "verify");
    let h = load_hamiltonian(cfg, hamiltonian)?;
    let structure = structure_report(cfg, &h)?;
    let mut named: Vec<(String, Polynomial, f64)> = vec![("H".into(), h.total().map_err(runtime)?, CONJ_TOL_BUILT)];
    if let Some(dir) = normal_form {
        let nf = load_normal_form(cfg, dir)?;
        named.push(("Z".into(), nf.z.clone(), CONJ_TOL_TRANSFORMED));
        named.push(("R_N".into(), nf.r_n.clone(), CONJ_TOL_TRANSFORMED));
        named.push(("R_T".into(), nf.r_t.clone(), CONJ_TOL_TRANSFORMED));
        for (i, s) in nf.generators.iter().enumerate() {
            named.push((format!("S_{i}"), s.clone(), CONJ_TOL_TRANSFORMED));
        }
        named.push(("H0+Z+R_N+R_T".into(), nf.transformed_hamiltonian()?, CONJ_TOL_TRANSFORMED));
    }
    let asymmetric: Vec<String> = named.iter().filter(|(_, f, tol)| !f.conj_symmetry_check(*tol)).map(|(n, _, _)| n.clone()).collect();
    let states = 100;
    let seed = cfg.experiment_seed();
    let p = cfg.norm_p();
    let real_slice_max_imag = named.iter().map(|(_, f, _)| real_slice_imag(f, p, 0.5, states, seed)).fold(0.0, f64::max);
    let passed = structure.passed && asymmetric.is_empty() && real_slice_max_imag <= REAL_SLICE_TOL;
    let report = VerifyReport { structure, asymmetric, real_slice_max_imag, states, passed };
    fs::create_dir_all(out)?;
    write_json(&out.join("verify.json"), &hdr, "verify", &report)?;
    println!("verify: {}", if passed { "passed" } else { "FAILED" });
    Ok(Outcome { passed, summary: format!("max imaginary part {real_slice_max_imag:e}") })
}

//! The experiment configuration document.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use dynamics::{IntegratorConfig, Scheme};
use normalform::NormalFormParams;
use pde_frontend::{Equation, NonlinearitySpec};
use poly_core::LatticeConfig;
use spectrum::DEFAULT_BUDGET;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct LatticeSection {
    pub theta: u8,
    #[serde(rename = "J")]
    pub j_max: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub include_zero: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PotentialSection {
    pub m: f64,
    pub seed: u64,
    /// Use `V = 0` instead of a sampled potential.
    #[serde(default)]
    pub zero: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct NfSection {
    pub gamma: f64,
    pub alpha: f64,
    #[serde(rename = "N")]
    pub n: i32,
    pub r_star: u32,
    pub p: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rt_degree: Option<u32>,
    #[serde(default = "default_residual_tol")]
    pub residual_tol: f64,
}

fn default_residual_tol() -> f64 {
    1e-10
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct IntegrateSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(rename = "T")]
    pub t: f64,
    #[serde(default = "default_scheme")]
    pub scheme: Scheme,
    #[serde(default = "default_fp_tol")]
    pub fixed_point_tol: f64,
    #[serde(default = "default_iters")]
    pub max_iters: usize,
    #[serde(default = "default_record")]
    pub record_every: usize,
    #[serde(default)]
    pub per_mode: bool,
}

fn default_scheme() -> Scheme {
    Scheme::ImplicitMidpoint
}
fn default_fp_tol() -> f64 {
    1e-14
}
fn default_iters() -> usize {
    100
}
fn default_record() -> usize {
    100
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Scan,
    Measure,
    Stability,
    Scaling,
    Verify,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub kind: ExperimentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ladder: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Degree `r` of the scanned index family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gammas: Option<Vec<f64>>,
    /// `N` values for a measure run; defaults to `nf.N`.
    #[serde(default, rename = "N_values", skip_serializing_if = "Option::is_none")]
    pub n_values: Option<Vec<i32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilons: Option<Vec<f64>>,
    #[serde(default = "default_threshold")]
    pub threshold_factor: f64,
    #[serde(default = "default_decay")]
    pub decay: f64,
    #[serde(default = "default_budget")]
    pub budget: usize,
    /// Semi-bound parameters for structure checks.
    #[serde(default)]
    pub beta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
}

fn default_threshold() -> f64 {
    2.0
}
fn default_decay() -> f64 {
    1.0
}
fn default_budget() -> usize {
    DEFAULT_BUDGET
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub lattice: LatticeSection,
    pub potential: PotentialSection,
    #[serde(default = "NonlinearitySpec::zero")]
    pub nonlinearity: NonlinearitySpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nf: Option<NfSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integrate: Option<IntegrateSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentSection>,
}

fn positive(field: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(CliError::config(field, format!("must be a positive number, got {v}")))
    }
}

impl ExperimentConfig {
    /// Parses and validates; errors name the offending field.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            CliError::config(if path.is_empty() { "." } else { &path }, e.inner())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let lat = &self.lattice;
        if lat.theta > 1 {
            return Err(CliError::config("lattice.theta", format!("must be 0 or 1, got {}", lat.theta)));
        }
        if lat.j_max < 1 {
            return Err(CliError::config("lattice.J", format!("must be >= 1, got {}", lat.j_max)));
        }
        if lat.theta == 1 && lat.include_zero == Some(true) {
            return Err(CliError::config("lattice.include_zero", "theta = 1 excludes the zero mode"));
        }
        if lat.theta == 0 && lat.include_zero == Some(false) {
            return Err(CliError::config("lattice.include_zero", "theta = 0 lattices always contain the zero mode"));
        }
        if !(self.potential.m > 0.5) {
            return Err(CliError::config("potential.m", format!("must exceed 1/2, got {}", self.potential.m)));
        }
        self.nonlinearity.validate()?;
        if let Some(nf) = &self.nf {
            positive("nf.gamma", nf.gamma)?;
            positive("nf.alpha", nf.alpha)?;
            positive("nf.residual_tol", nf.residual_tol)?;
            if nf.n < 1 || nf.n > lat.j_max {
                return Err(CliError::config("nf.N", format!("must lie in [1, J = {}], got {}", lat.j_max, nf.n)));
            }
            if nf.r_star < 1 {
                return Err(CliError::config("nf.r_star", "must be >= 1"));
            }
            self.nf_params()?.validate(lat.j_max)?;
        }
        if let Some(int) = &self.integrate {
            positive("integrate.T", int.t)?;
            if let Some(dt) = int.dt {
                positive("integrate.dt", dt)?;
            }
            positive("integrate.fixed_point_tol", int.fixed_point_tol)?;
            if int.max_iters == 0 || int.record_every == 0 {
                return Err(CliError::config("integrate", "max_iters and record_every must be >= 1"));
            }
        }
        if let Some(ex) = &self.experiment {
            if let Some(eps) = &ex.epsilons {
                for (i, &e) in eps.iter().enumerate() {
                    positive(&format!("experiment.epsilons[{i}]"), e)?;
                }
            }
            if let Some(g) = &ex.gammas {
                if g.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                    return Err(CliError::config("experiment.gammas", "values must be finite and nonnegative"));
                }
            }
            if ex.threshold_factor <= 1.0 {
                return Err(CliError::config("experiment.threshold_factor", "must exceed 1"));
            }
            if ex.samples == Some(0) {
                return Err(CliError::config("experiment.samples", "must be >= 1"));
            }
        }
        Ok(())
    }

    pub fn lattice(&self) -> LatticeConfig {
        LatticeConfig::standard(self.lattice.theta, self.lattice.j_max).expect("validated")
    }

    pub fn equation(&self) -> Equation {
        if self.lattice.theta == 0 {
            Equation::TypeOne
        } else {
            Equation::TypeTwo
        }
    }

    pub fn nf(&self) -> Result<&NfSection> {
        self.nf.as_ref().ok_or_else(|| CliError::config("nf", "section is required for this command"))
    }

    pub fn integrate_section(&self) -> Result<&IntegrateSection> {
        self.integrate.as_ref().ok_or_else(|| CliError::config("integrate", "section is required for this command"))
    }

    pub fn experiment(&self) -> Result<&ExperimentSection> {
        self.experiment.as_ref().ok_or_else(|| CliError::config("experiment", "section is required for this command"))
    }

    pub fn nf_params(&self) -> Result<NormalFormParams> {
        let nf = self.nf()?;
        Ok(NormalFormParams { gamma: nf.gamma, alpha: nf.alpha, n: nf.n, r_star: nf.r_star, p: nf.p, rt_degree: nf.rt_degree })
    }

    /// Sobolev exponent for norms; taken from `nf.p`, defaulting to 1.
    pub fn norm_p(&self) -> f64 {
        self.nf.as_ref().map_or(1.0, |nf| nf.p)
    }

    pub fn experiment_seed(&self) -> u64 {
        self.experiment.as_ref().and_then(|e| e.seed).unwrap_or(self.potential.seed)
    }

    pub fn integrator(&self, omega: &poly_core::FrequencyVector) -> Result<(IntegratorConfig, f64)> {
        let int = self.integrate_section()?;
        let mut cfg = IntegratorConfig::default_for(omega);
        if let Some(dt) = int.dt {
            cfg.dt = dt;
        }
        cfg.scheme = int.scheme;
        cfg.fixed_point_tol = int.fixed_point_tol;
        cfg.max_iters = int.max_iters;
        cfg.record_every = int.record_every;
        Ok((cfg, int.t))
    }

    /// Canonical serialization of the resolved config.
    pub fn canonical_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }

    pub fn hash(&self) -> String {
        let text = serde_json::to_string(&self.canonical_json()).expect("config serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

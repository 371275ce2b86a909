//! Time stepping on Fourier coefficients.

use std::io::Write;

use bracket::{midpoint_step, velocity, BracketError, MidpointSettings, SymplecticForm};
use poly_core::{Complex64, Polynomial, State};

use crate::error::{DynamicsError, Result};
use crate::system::{HamiltonianSystem, IntegratorConfig, Scheme, MAX_HALVINGS};

/// Diagnostics recorded alongside each stored state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub norm_p: f64,
    pub energy: f64,
    pub momentum: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub p: f64,
    pub times: Vec<f64>,
    pub states: Vec<State>,
    pub diagnostics: Vec<Sample>,
    /// Number of steps that needed the halving fallback.
    pub halved_steps: usize,
    pub advisories: Vec<String>,
}

impl Trajectory {
    pub fn last(&self) -> &State {
        self.states.last().expect("a trajectory holds at least the initial state")
    }

    /// `max_t |H(t) - H(0)|` over the stored samples.
    pub fn max_energy_error(&self) -> f64 {
        let h0 = self.diagnostics[0].energy;
        self.diagnostics.iter().map(|d| (d.energy - h0).abs()).fold(0.0, f64::max)
    }

    pub fn max_momentum_error(&self) -> f64 {
        let m0 = self.diagnostics[0].momentum;
        self.diagnostics.iter().map(|d| (d.momentum - m0).abs()).fold(0.0, f64::max)
    }

    /// CSV with columns `t,norm_p,H,momentum`, optionally followed by `|u_j|` per mode.
    pub fn write_csv(&self, out: &mut impl Write, per_mode: bool) -> std::io::Result<()> {
        write!(out, "t,norm_p,H,momentum")?;
        let modes = self.states[0].lattice.modes();
        if per_mode {
            for j in &modes {
                write!(out, ",abs_u_{j}")?;
            }
        }
        writeln!(out)?;
        for (d, s) in self.diagnostics.iter().zip(&self.states) {
            write!(out, "{:e},{:e},{:e},{:e}", d.t, d.norm_p, d.energy, d.momentum)?;
            if per_mode {
                for z in &s.u {
                    write!(out, ",{:e}", z.norm())?;
                }
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Sequential stepper shared by [`integrate`] and the stability runs.
pub(crate) struct Stepper<'a> {
    sys: &'a HamiltonianSystem,
    form: SymplecticForm,
    total: Option<Polynomial>,
    cfg: IntegratorConfig,
    pub(crate) u: Vec<Complex64>,
    pub(crate) t: f64,
    pub(crate) halved_steps: usize,
}

impl<'a> Stepper<'a> {
    pub(crate) fn new(sys: &'a HamiltonianSystem, u0: &State, cfg: IntegratorConfig) -> Result<Self> {
        cfg.validate()?;
        sys.check_state(u0)?;
        let total = match cfg.scheme {
            Scheme::Rk4Reference => Some(sys.total()?),
            Scheme::ImplicitMidpoint => None,
        };
        Ok(Stepper { sys, form: sys.form(), total, cfg, u: u0.u.clone(), t: 0.0, halved_steps: 0 })
    }

    pub(crate) fn state(&self) -> State {
        State { lattice: self.sys.omega.lattice, u: self.u.clone() }
    }

    fn rotate(&self, u: &mut [Complex64], tau: f64) {
        let lattice = self.sys.omega.lattice;
        for ((z, &j), &w) in u.iter_mut().zip(&lattice.modes()).zip(&self.sys.omega.omega) {
            *z *= Complex64::from_polar(1.0, -lattice.sgn_theta(j) * w * tau);
        }
    }

    fn strang(&self, u: &[Complex64], h: f64, depth: u32, halved: &mut bool) -> Result<Vec<Complex64>> {
        let mut v = u.to_vec();
        self.rotate(&mut v, 0.5 * h);
        let settings = MidpointSettings { tol: self.cfg.fixed_point_tol, max_iters: self.cfg.max_iters };
        let field = |x: &[Complex64]| velocity(&self.sys.p, self.form, x);
        let stepped = if self.sys.p.is_empty() { Ok(v.clone()) } else { midpoint_step(&field, &v, h, settings) };
        match stepped {
            Ok(mut w) if w.iter().all(|z| z.re.is_finite() && z.im.is_finite()) => {
                self.rotate(&mut w, 0.5 * h);
                Ok(w)
            }
            Ok(_) | Err(BracketError::NoConvergence(_)) => {
                if depth >= MAX_HALVINGS {
                    return Err(DynamicsError::NoConvergence { t: self.t, dt: h });
                }
                *halved = true;
                let half = self.strang(u, 0.5 * h, depth + 1, halved)?;
                self.strang(&half, 0.5 * h, depth + 1, halved)
            }
            Err(e) => Err(e.into()),
        }
    }

    fn rk4(&self, u: &[Complex64], h: f64) -> Vec<Complex64> {
        let f = self.total.as_ref().expect("built for rk4");
        let add = |a: &[Complex64], b: &[Complex64], c: f64| -> Vec<Complex64> { a.iter().zip(b).map(|(x, y)| x + y * c).collect() };
        let k1 = velocity(f, self.form, u);
        let k2 = velocity(f, self.form, &add(u, &k1, 0.5 * h));
        let k3 = velocity(f, self.form, &add(u, &k2, 0.5 * h));
        let k4 = velocity(f, self.form, &add(u, &k3, h));
        (0..u.len()).map(|i| u[i] + (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0)).collect()
    }

    pub(crate) fn step(&mut self, h: f64) -> Result<()> {
        let next = match self.cfg.scheme {
            Scheme::ImplicitMidpoint => {
                let mut halved = false;
                let next = self.strang(&self.u, h, 0, &mut halved)?;
                self.halved_steps += usize::from(halved);
                next
            }
            Scheme::Rk4Reference => self.rk4(&self.u, h),
        };
        self.t += h;
        if next.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(DynamicsError::NonFinite(self.t));
        }
        self.u = next;
        Ok(())
    }
}

/// Splits `[0, t_end]` into equal steps no longer than `dt`.
pub(crate) fn step_grid(t_end: f64, dt: f64) -> (usize, f64) {
    let n = ((t_end / dt) - 1e-9).ceil().max(1.0) as usize;
    (n, t_end / n as f64)
}

fn sample(sys: &HamiltonianSystem, s: &State, t: f64, p: f64) -> Sample {
    Sample { t, norm_p: s.sobolev_norm(p), energy: sys.energy(s), momentum: s.momentum_functional() }
}

/// Integrates `du_j/dt = -i sgn^theta(j) dH/dubar_j` from `u0` over `[0, t_end]`.
///
/// Diagnostics use the norm `||u||_p`.
pub fn integrate(sys: &HamiltonianSystem, u0: &State, cfg: &IntegratorConfig, t_end: f64, p: f64) -> Result<Trajectory> {
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(DynamicsError::InvalidConfig(format!("T must be positive, got {t_end}")));
    }
    let mut stepper = Stepper::new(sys, u0, *cfg)?;
    let (n, h) = step_grid(t_end, cfg.dt);
    let mut traj = Trajectory {
        p,
        times: vec![0.0],
        states: vec![u0.clone()],
        diagnostics: vec![sample(sys, u0, 0.0, p)],
        halved_steps: 0,
        advisories: cfg.stability_advisory(&sys.omega).into_iter().collect(),
    };
    for i in 1..=n {
        stepper.step(h)?;
        if i % cfg.record_every == 0 || i == n {
            let t = i as f64 * h;
            let s = stepper.state();
            traj.diagnostics.push(sample(sys, &s, t, p));
            traj.times.push(t);
            traj.states.push(s);
        }
    }
    traj.halved_steps = stepper.halved_steps;
    Ok(traj)
}

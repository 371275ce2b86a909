use bracket::SymplecticForm;
use dynamics::*;
use normalform::{birkhoff_iterate, NormalFormParams};
use poly_core::{Complex64, FrequencyVector, LatticeConfig, MultiIndexPair, Polynomial, State};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn frequencies(lattice: LatticeConfig, seed: u64) -> FrequencyVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let omega = lattice
        .modes()
        .iter()
        .map(|&j| lattice.sgn_theta(j) * (-(j * j) as f64 + rng.gen_range(-0.5..0.5) / j.abs().max(1) as f64))
        .collect();
    FrequencyVector { lattice, omega }
}

fn add_real(p: &mut Polynomial, l: &[(i32, u32)], k: &[(i32, u32)], v: Complex64) {
    let mi = MultiIndexPair::new(l, k);
    p.add_scalar(mi.clone(), v).unwrap();
    p.add_scalar(mi.swapped(), v.conj()).unwrap();
}

/// Random real homogeneous polynomial of degree `d` with zero momentum.
fn random_zero_momentum(lattice: LatticeConfig, d: u32, terms: usize, seed: u64) -> Polynomial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let modes = lattice.modes();
    let mut p = Polynomial::zero(lattice);
    let mut added = 0;
    while added < terms {
        let split = rng.gen_range(1..d);
        let l: Vec<(i32, u32)> = (0..split).map(|_| (modes[rng.gen_range(0..modes.len())], 1)).collect();
        let k: Vec<(i32, u32)> = (split..d).map(|_| (modes[rng.gen_range(0..modes.len())], 1)).collect();
        let mi = MultiIndexPair::new(&l, &k);
        if mi.momentum() != 0 || mi.is_diagonal() {
            continue;
        }
        add_real(&mut p, &l, &k, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        added += 1;
    }
    p
}

fn ladder() -> Vec<f64> {
    geometric_ladder(1e-3, 2.0, 5)
}

#[test]
fn h0_alone_is_conserved() {
    for theta in [0u8, 1] {
        let lattice = LatticeConfig::standard(theta, 4).unwrap();
        let h0 = frequencies(lattice, 2).h0_polynomial();
        let form = SymplecticForm { theta };
        let s = State::random(lattice, 2.0, 0.3, 0.0, 5);
        assert_eq!(drift_functional(&[&h0], &s, 2.0, form).unwrap(), 0.0);
        let rep = drift_scaling(&[&h0], 2.0, form, &ladder(), &DriftScalingConfig::default()).unwrap();
        assert_eq!(rep.fit, ScalingFit::Conserved);
        assert!(rep.slope().is_none());
    }
}

#[test]
fn total_and_perturbation_drift_agree() {
    for theta in [0u8, 1] {
        let lattice = LatticeConfig::standard(theta, 4).unwrap();
        let h0 = frequencies(lattice, 3).h0_polynomial();
        let p = random_zero_momentum(lattice, 3, 8, 10 + theta as u64);
        let total = h0.add(&p).unwrap();
        let form = SymplecticForm { theta };
        for seed in 0..10 {
            let s = State::random(lattice, 2.0, 0.2, 0.5, seed);
            let a = drift_functional(&[&total], &s, 2.0, form).unwrap();
            let b = drift_functional(&[&p], &s, 2.0, form).unwrap();
            let parts = drift_functional(&[&h0, &p], &s, 2.0, form).unwrap();
            assert_eq!(a, b);
            assert_eq!(parts, b);
        }
    }
}

#[test]
fn quartic_drift_slope_is_four() {
    for theta in [0u8, 1] {
        let lattice = LatticeConfig::standard(theta, 5).unwrap();
        let p = random_zero_momentum(lattice, 4, 12, 30 + theta as u64);
        let rep = drift_scaling(&[&p], 2.0, SymplecticForm { theta }, &ladder(), &DriftScalingConfig::default()).unwrap();
        let slope = rep.slope().unwrap();
        assert!((slope - 4.0).abs() <= 0.2, "theta {theta}: slope {slope}");
        let again = drift_scaling(&[&p], 2.0, SymplecticForm { theta }, &ladder(), &DriftScalingConfig::default()).unwrap();
        assert_eq!(rep, again);
    }
}

#[test]
fn scaling_guards() {
    let lattice = LatticeConfig::standard(1, 3).unwrap();
    let p = random_zero_momentum(lattice, 3, 4, 1);
    let form = SymplecticForm { theta: 1 };
    assert!(matches!(drift_scaling(&[&p], 1.0, form, &[1e-3, 2e-3, 4e-3], &DriftScalingConfig::default()), Err(DynamicsError::DegenerateLadder(_))));
    let few = DriftScalingConfig { states: 10, ..Default::default() };
    assert!(drift_scaling(&[&p], 1.0, form, &ladder(), &few).is_err());
    let rep = drift_scaling(&[&p], 1.0, form, &ladder(), &DriftScalingConfig::default()).unwrap();
    let mut buf = Vec::new();
    rep.write_csv(&mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 6);
}

#[test]
fn drift_matches_trajectory_differences() {
    for theta in [0u8, 1] {
        let lattice = LatticeConfig::standard(theta, 3).unwrap();
        let p = random_zero_momentum(lattice, 3, 6, 50 + theta as u64);
        let sys = HamiltonianSystem::new(frequencies(lattice, 8), p.clone()).unwrap();
        let total = sys.total().unwrap();
        let form = SymplecticForm { theta };
        let u0 = State::random(lattice, 1.0, 0.3, 0.0, 4);
        let mut errs = Vec::new();
        for dt in [4e-3, 2e-3] {
            let traj = integrate(&sys, &u0, &IntegratorConfig::midpoint(dt), 1.0, 1.0).unwrap();
            let mut worst: f64 = 0.0;
            for i in 1..traj.states.len() - 1 {
                let fd = (traj.states[i + 1].sobolev_norm_sq(1.0) - traj.states[i - 1].sobolev_norm_sq(1.0)) / (2.0 * dt);
                let exact = drift_functional(&[&total], &traj.states[i], 1.0, form).unwrap();
                worst = worst.max((fd - exact).abs());
            }
            errs.push(worst);
        }
        assert!(errs[0] < 1e-3, "theta {theta}: {errs:?}");
        let ratio = errs[0] / errs[1];
        assert!((3.0..5.0).contains(&ratio), "theta {theta}: ratio {ratio}");
    }
}

#[test]
fn head_states_drift_only_through_r_t() {
    let lattice = LatticeConfig::standard(1, 3).unwrap();
    let omega = frequencies(lattice, 61);
    let p = random_zero_momentum(lattice, 3, 6, 62).add(&random_zero_momentum(lattice, 4, 6, 63)).unwrap();
    let prm = NormalFormParams { gamma: 1e-3, alpha: 2.0, n: 3, r_star: 1, p: 1.0, rt_degree: None };
    let res = birkhoff_iterate(&omega, &p, &prm).unwrap();
    let form = SymplecticForm { theta: 1 };
    for seed in 0..10 {
        let s = State::random(lattice, 1.0, 0.1, 0.0, seed);
        assert_eq!(s.project_tail(3), State::zeros(lattice));
        let z = drift_functional(&[&res.z], &s, 1.0, form).unwrap();
        assert!(z.abs() < 1e-15, "Z drift {z}");
        assert!(res.r_n.is_empty());
        let all = drift_functional(&[&omega.h0_polynomial(), &res.z, &res.r_n, &res.r_t], &s, 1.0, form).unwrap();
        let rt = drift_functional(&[&res.r_t], &s, 1.0, form).unwrap();
        assert!((all - rt).abs() <= 1e-12 * rt.abs().max(1e-300) + 1e-18);
    }
}

fn resonant(w2: f64) -> HamiltonianSystem {
    let lattice = LatticeConfig::standard(0, 2).unwrap();
    let omega = FrequencyVector { lattice, omega: vec![w2, 1.0, 0.37, 1.0, w2] };
    let mut p = Polynomial::zero(lattice);
    for s in [1, -1] {
        add_real(&mut p, &[(s, 2)], &[(2 * s, 1)], c(1.0, 0.0));
    }
    HamiltonianSystem::new(omega, p).unwrap()
}

#[test]
fn linear_flow_survives() {
    for theta in [0u8, 1] {
        let lattice = LatticeConfig::standard(theta, 3).unwrap();
        let sys = HamiltonianSystem::linear(frequencies(lattice, 1));
        let out = stability_time(&sys, 0.5, 2.0, &IntegratorConfig::midpoint(0.05), 50.0, 2.0, 7).unwrap();
        assert_eq!(out, StabilityOutcome::Survived { t_max: 50.0 });
    }
}

#[test]
fn exact_resonance_escapes_and_detuning_survives() {
    let cfg = IntegratorConfig::midpoint(0.01);
    let mut times = Vec::new();
    for eps in [0.4, 0.2, 0.1] {
        let out = stability_time(&resonant(2.0), eps, 2.0, &cfg, 200.0, 2.0, 3).unwrap();
        assert!(!out.survived(), "eps {eps}");
        times.push(out.time());
    }
    assert!(times.windows(2).all(|w| w[1] >= w[0]), "{times:?}");
    let detuned = stability_time(&resonant(2.7), 0.4, 2.0, &cfg, 200.0, 2.0, 3).unwrap();
    assert!(detuned.survived());
}

#[test]
fn initial_state_shape() {
    let lattice = LatticeConfig::standard(0, 4).unwrap();
    let s = initial_state(lattice, 2.0, 0.3, 11);
    assert!((pair_norm(&s, 2.0) - 0.3).abs() < 1e-15);
    let ratio = s.get(4).norm() / s.get(1).norm();
    assert!((ratio - 4f64.powf(-3.0)).abs() < 1e-12);
    assert_eq!(s, initial_state(lattice, 2.0, 0.3, 11));
    assert!(stability_time(&resonant(2.0), 0.0, 2.0, &IntegratorConfig::midpoint(0.1), 1.0, 2.0, 1).is_err());
}

#[test]
fn normal_form_raises_the_drift_exponent() {
    let lattice = LatticeConfig::standard(1, 3).unwrap();
    let omega = frequencies(lattice, 81);
    let p = random_zero_momentum(lattice, 3, 6, 82).add(&random_zero_momentum(lattice, 4, 6, 83)).unwrap();
    let form = SymplecticForm { theta: 1 };
    let cfg = DriftScalingConfig::default();
    let before = drift_scaling(&[&p], 1.0, form, &ladder(), &cfg).unwrap().slope().unwrap();
    assert!((before - 3.0).abs() < 0.2, "original slope {before}");
    for r_star in [1u32, 2] {
        let prm = NormalFormParams { gamma: 1e-3, alpha: 2.0, n: 3, r_star, p: 1.0, rt_degree: None };
        let res = birkhoff_iterate(&omega, &p, &prm).unwrap();
        let h0 = omega.h0_polynomial();
        let after = drift_scaling(&[&h0, &res.z, &res.r_n, &res.r_t], 1.0, form, &ladder(), &cfg).unwrap().slope().unwrap();
        assert!(after >= (r_star + 4) as f64 - 0.3, "r* {r_star}: slope {after}");
        assert!(after - before >= (r_star + 1) as f64 - 0.5, "r* {r_star}: {before} -> {after}");
    }
}

proptest::proptest! {
    #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]

    #[test]
    fn random_zero_momentum_flows_keep_invariants(theta in 0u8..2, seed in 0u64..10_000, radius in 0.05..0.4f64) {
        let lattice = LatticeConfig::standard(theta, 3).unwrap();
        let omega = frequencies(lattice, seed);
        let p = random_zero_momentum(lattice, 3, 3, seed ^ 1).add(&random_zero_momentum(lattice, 4, 3, seed ^ 2)).unwrap();
        let form = SymplecticForm { theta };
        let h0 = omega.h0_polynomial();
        let total = h0.add(&p).unwrap();
        let s = State::random(lattice, 1.0, radius, 1.0, seed);
        let a = drift_functional(&[&total], &s, 1.0, form).unwrap();
        let b = drift_functional(&[&p], &s, 1.0, form).unwrap();
        proptest::prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
        let sys = HamiltonianSystem::new(omega, p).unwrap();
        let traj = integrate(&sys, &s, &IntegratorConfig::midpoint(0.01), 1.0, 1.0).unwrap();
        proptest::prop_assert!(traj.max_momentum_error() <= 1e-9);
        proptest::prop_assert!(traj.max_energy_error() <= 1e-4);
    }
}

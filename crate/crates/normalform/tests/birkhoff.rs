use bracket::{bracket_with_sobolev_sq, SymplecticForm};
use normalform::*;
use poly_core::{gamma_gt2, gamma_le2, Coefficient, Complex64, FrequencyVector, LatticeConfig, LedgerEntry, MultiIndexPair, Polynomial, State};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn frequencies(lattice: LatticeConfig, seed: u64) -> FrequencyVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v: Vec<f64> = (0..=lattice.j_max).map(|_| rng.gen_range(-0.5..0.5)).collect();
    let w: Vec<f64> = (0..=lattice.j_max).map(|_| rng.gen_range(-0.5..0.5)).collect();
    let omega = lattice
        .modes()
        .iter()
        .map(|&j| {
            let a = j.unsigned_abs() as usize;
            let vj = if lattice.theta == 0 || j > 0 { v[a] } else { w[a] };
            lattice.sgn_theta(j) * (-(j * j) as f64 + vj / (j.abs().max(1) as f64))
        })
        .collect();
    FrequencyVector { lattice, omega }
}

/// Random real polynomial with ledger entries `(l, 0, M(l,k))` in theta 0 and factored form in theta 1.
fn random_structured(lattice: LatticeConfig, seed: u64, terms: usize, degrees: &[u32]) -> Polynomial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let modes = lattice.modes();
    let mut p = Polynomial::zero(lattice);
    for _ in 0..terms {
        let d = degrees[rng.gen_range(0..degrees.len())];
        let mut l = Vec::new();
        let mut k = Vec::new();
        for _ in 0..d {
            let j = modes[rng.gen_range(0..modes.len())];
            if rng.gen_bool(0.5) {
                l.push((j, 1));
            } else {
                k.push((j, 1));
            }
        }
        let mi = MultiIndexPair::new(&l, &k);
        let v = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        for (m, val) in [(mi.clone(), v), (mi.swapped(), v.conj())] {
            let coef = if lattice.theta == 0 {
                let e = LedgerEntry { l0: m.l_sparse(), k0: vec![], i0: m.momentum(), inner: val };
                if e.linear_form() == 0.0 {
                    continue;
                }
                Coefficient::from_ledger(vec![e])
            } else {
                Coefficient::from_tilde(val, &m)
            };
            p.add_term(m, coef).unwrap();
        }
    }
    p
}

fn params(n: i32, r_star: u32) -> NormalFormParams {
    NormalFormParams { gamma: 1e-3, alpha: 2.0, n, r_star, p: 2.0, rt_degree: None }
}

#[test]
fn homological_examples() {
    let lattice = LatticeConfig::standard(0, 3).unwrap();
    let omega = FrequencyVector { lattice, omega: lattice.modes().iter().map(|&j| -(j * j) as f64).collect() };
    let mi = MultiIndexPair::new(&[(1, 1), (2, 1)], &[(3, 1)]);
    let mut g = Polynomial::zero(lattice);
    g.add_scalar(mi.clone(), c(2.0, 0.0)).unwrap();
    let (s, z) = solve_homological(&omega, &g, &params(3, 1)).unwrap();
    assert!(z.is_empty());
    assert!((s.scalar_of(&mi) - c(2.0, 0.0) / c(0.0, -4.0)).norm() < 1e-15);
    assert!((s.scalar_of(&mi) - c(0.0, 0.5)).norm() < 1e-15);
    assert_eq!(homological_residual(&omega, &g, &s, &z).unwrap(), 0.0);

    let mut diag = Polynomial::zero(lattice);
    diag.add_scalar(MultiIndexPair::new(&[(1, 2)], &[(1, 2)]), c(1.0, 0.0)).unwrap();
    diag.add_scalar(MultiIndexPair::new(&[(1, 1), (-1, 1)], &[(1, 1), (-1, 1)]), c(0.5, 0.0)).unwrap();
    let (s, z) = solve_homological(&omega, &diag, &params(3, 1)).unwrap();
    assert!(s.is_empty());
    assert_eq!(z, diag);
}

#[test]
fn homological_solution_is_real_and_exact() {
    for theta in [0u8, 1] {
        let lattice = LatticeConfig::standard(theta, 4).unwrap();
        let omega = frequencies(lattice, 3);
        for seed in 0..10 {
            let g = gamma_le2(&random_structured(lattice, seed, 8, &[3, 4]), 4);
            let (s, z) = solve_homological(&omega, &g, &params(4, 1)).unwrap();
            assert!(s.conj_symmetry_check(1e-12));
            assert!(homological_residual(&omega, &g, &s, &z).unwrap() <= 1e-12);
        }
    }
}

#[test]
fn zero_input_gives_trivial_result() {
    let lattice = LatticeConfig::standard(1, 3).unwrap();
    let res = birkhoff_iterate(&frequencies(lattice, 1), &Polynomial::zero(lattice), &params(3, 2)).unwrap();
    assert!(res.z.is_empty() && res.r_n.is_empty() && res.r_t.is_empty());
    assert_eq!(res.generators.len(), 3);
    assert!(res.generators.iter().all(Polynomial::is_empty));
}

#[test]
fn single_stage_matches_manual_split() {
    let lattice = LatticeConfig::standard(0, 4).unwrap();
    let omega = frequencies(lattice, 5);
    let p = random_structured(lattice, 8, 10, &[3]);
    let prm = params(2, 1);
    let res = birkhoff_iterate(&omega, &p, &prm).unwrap();
    let (z3, _) = nf_projector(&gamma_le2(&p, 2), &omega, &prm);
    let z_cubic = res.z.homogeneous(3);
    assert!(z_cubic.sub(&z3).unwrap().max_coefficient() < 1e-14);
    assert!(res.r_n.homogeneous(3).sub(&gamma_gt2(&p, 2)).unwrap().max_coefficient() < 1e-14);
}

fn check_certificates(res: &NormalFormResult, prm: &NormalFormParams) {
    for (m, _) in res.z.terms() {
        assert!(is_resonant_term(&res.omega, m, prm), "Z term {m} is not resonant");
        assert!(m.degree() <= prm.top_degree());
    }
    for (m, _) in res.r_n.terms() {
        assert!(m.tail_units(prm.n) >= 3 || m.momentum().abs() > prm.n as i64);
    }
    assert!(res.r_t.min_degree().is_none_or(|d| d >= prm.r_star + 4));
    assert!(res.diagnostics.split_mismatch < 1e-12);
    assert!(res.max_residual() <= 1e-12);
}

#[test]
fn certificates_and_reality() {
    for theta in [0u8, 1] {
        let lattice = LatticeConfig::standard(theta, 4).unwrap();
        let omega = frequencies(lattice, 11 + theta as u64);
        let p = random_structured(lattice, 21, 8, &[3, 4]);
        for (n, r_star) in [(2, 1), (4, 2)] {
            let prm = params(n, r_star);
            let res = birkhoff_iterate(&omega, &p, &prm).unwrap();
            check_certificates(&res, &prm);
            let total = res.transformed_hamiltonian().unwrap();
            assert!(total.conj_symmetry_check(1e-9), "theta {theta}");
            if theta == 0 {
                assert!(res.diagnostics.ledgers_intact);
                for part in [&res.z, &res.r_n, &res.r_t] {
                    assert!(part.structure_mismatch() < 1e-9);
                    assert!(part.ledger_entries_fit());
                    assert_eq!(part.ledger_conjugation_violations(1e-8).unwrap(), 0);
                }
            }
        }
    }
}

#[test]
fn rn_vanishes_on_head_states() {
    let lattice = LatticeConfig::standard(0, 4).unwrap();
    let omega = frequencies(lattice, 2);
    let p = random_structured(lattice, 4, 20, &[3, 4]);
    let res = birkhoff_iterate(&omega, &p, &params(2, 1)).unwrap();
    for seed in 0..10 {
        let s = State::random(lattice, 1.0, 0.5, 0.0, seed).project_head(2);
        let tailless: Polynomial = res.r_n.filter(|m, _| m.tail_units(2) >= 3);
        assert!(tailless.eval(&s).norm() <= f64::EPSILON);
    }
}

#[test]
fn z_commutes_with_sobolev_norm_at_full_head() {
    for theta in [0u8, 1] {
        let lattice = LatticeConfig::standard(theta, 4).unwrap();
        let omega = frequencies(lattice, 40 + theta as u64);
        let p = random_structured(lattice, 9, 14, &[3, 4]);
        let prm = params(4, 2);
        let res = birkhoff_iterate(&omega, &p, &prm).unwrap();
        let form = SymplecticForm { theta };
        let head_z = res.z.filter(|m, _| m.momentum() == 0 || theta == 1);
        for (m, _) in head_z.terms() {
            if theta == 1 {
                assert!(m.is_diagonal(), "theta 1 Z-term {m} not diagonal");
            }
        }
        assert!(bracket_with_sobolev_sq(&head_z, prm.p, form).max_coefficient() < 1e-12);
    }
}

fn residual_exponent(theta: u8, r_star: u32, radii: &[f64]) -> (f64, Vec<f64>) {
    let lattice = LatticeConfig::standard(theta, 3).unwrap();
    let omega = frequencies(lattice, 71 + theta as u64);
    let p = random_structured(lattice, 13, 10, &[3, 4]);
    let prm = params(3, r_star);
    let res = birkhoff_iterate(&omega, &p, &prm).unwrap();
    let h = omega.h0_polynomial().add(&p).unwrap();
    let nf = res.transformed_hamiltonian().unwrap();
    let settings = TransformSettings { step: 2e-3, ..Default::default() };
    let mut errs = Vec::new();
    for &r in radii {
        let mut worst: f64 = 0.0;
        for seed in 0..3 {
            let s = State::random(lattice, prm.p, r, 1.0, 100 + seed);
            let t = transform_state(&res.generators, &s, Direction::Forward, settings).unwrap();
            worst = worst.max((h.eval(&t) - nf.eval(&s)).norm());
        }
        errs.push(worst);
    }
    let n = radii.len();
    let slope = (errs[0] / errs[n - 1]).ln() / (radii[0] / radii[n - 1]).ln();
    (slope, errs)
}

#[test]
fn transformed_hamiltonian_matches_numeric_composition() {
    for theta in [0u8, 1] {
        let (slope, errs) = residual_exponent(theta, 1, &[0.08, 0.04, 0.02]);
        assert!(slope >= 1.0 + 3.5, "theta {theta}: slope {slope}, errs {errs:?}");
    }
}

#[test]
fn transform_round_trip() {
    let lattice = LatticeConfig::standard(1, 3).unwrap();
    let omega = frequencies(lattice, 5);
    let p = random_structured(lattice, 6, 10, &[3, 4]);
    let res = birkhoff_iterate(&omega, &p, &params(3, 2)).unwrap();
    let s = State::random(lattice, 2.0, 1e-2, 1.0, 9);
    let settings = TransformSettings::default();
    let t = transform_state(&res.generators, &s, Direction::Forward, settings).unwrap();
    let back = transform_state(&res.generators, &t, Direction::Inverse, settings).unwrap();
    assert!(back.sub(&s).sobolev_norm(2.0) <= 1e-8);
    let zero = State::zeros(lattice);
    assert_eq!(transform_state(&res.generators, &zero, Direction::Forward, settings).unwrap(), zero);
    assert_eq!(transform_state(&[], &s, Direction::Forward, settings).unwrap(), s);
    assert!(near_identity_ratio(&res.generators, &s, 2.0, 2, settings).unwrap().is_finite());
}

#[test]
fn result_directory_round_trip() {
    let lattice = LatticeConfig::standard(0, 3).unwrap();
    let omega = frequencies(lattice, 5);
    let p = random_structured(lattice, 6, 6, &[3, 4]);
    let res = birkhoff_iterate(&omega, &p, &params(3, 1)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    io::write_result(dir.path(), &res, &serde_json::json!({"version": "test"})).unwrap();
    let back = io::read_result(dir.path()).unwrap();
    assert_eq!(back.z, res.z);
    assert_eq!(back.r_t, res.r_t);
    assert_eq!(back.generators, res.generators);
}

#[test]
fn z_sobolev_bracket_bounded_by_tail_norm() {
    let (p, beta) = (2.0, 4.0);
    let mut checked = 0;
    for theta in [0u8, 1] {
        let lattice = LatticeConfig::standard(theta, 6).unwrap();
        let c_lat = lattice.modes().iter().map(|&j| poly_core::bracket_j(j).powi(-2)).sum::<f64>().sqrt();
        let omega = frequencies(lattice, 90 + theta as u64);
        let prm = NormalFormParams { gamma: 1e-3, alpha: 2.0, n: 3, r_star: 1, p, rt_degree: None };
        let res = birkhoff_iterate(&omega, &random_structured(lattice, 91, 40, &[3, 4]), &prm).unwrap();
        let form = SymplecticForm { theta };
        for r in 3..=prm.top_degree() {
            let zr = res.z.homogeneous(r);
            if zr.is_empty() {
                continue;
            }
            let c_f = poly_core::semi_bound_check(&zr, beta, 1.0).unwrap().minimal_c * (1.0 + 1e-12);
            let bracket = bracket_with_sobolev_sq(&zr, p, form);
            for seed in 0..200 {
                let s = State::random(lattice, p, 0.5, 0.5, seed);
                let rf = r as f64;
                let bound = 20.0
                    * rf.powf(p + 1.0)
                    * c_lat.powi(r as i32 - 1)
                    * c_f.powi(r as i32 - 2)
                    * prm.n as f64
                    * s.project_tail(prm.n).sobolev_norm(2.0)
                    * s.sobolev_norm(2.0).powi(r as i32 - 3)
                    * s.sobolev_norm(p);
                let value = bracket.eval(&s).norm();
                assert!(value <= bound * (1.0 + 1e-12), "theta {theta} r {r}: {value} > {bound}");
                checked += 1;
            }
        }
    }
    assert!(checked > 0);
}

proptest::proptest! {
    #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]

    #[test]
    fn homological_residual_and_certificates_hold(theta in 0u8..2, seed in 0u64..10_000, n in 1i32..=4, r_star in 1u32..=2) {
        let lattice = LatticeConfig::standard(theta, 4).unwrap();
        let omega = frequencies(lattice, seed);
        let p = random_structured(lattice, seed ^ 0x5eed, 6, &[3, 4]);
        let prm = NormalFormParams { gamma: 0.05, alpha: 2.0, n, r_star, p: 1.0, rt_degree: None };
        let res = birkhoff_iterate(&omega, &p, &prm).unwrap();
        check_certificates(&res, &prm);
        proptest::prop_assert!(res.transformed_hamiltonian().unwrap().conj_symmetry_check(1e-9));
    }
}

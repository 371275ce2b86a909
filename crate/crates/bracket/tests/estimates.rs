use bracket::{bracket_with_sobolev_sq, hamiltonian_vector_field, sobolev_bracket_bound, vector_field_bound, SymplecticForm};
use poly_core::{semi_bound_check, Coefficient, Complex64, LatticeConfig, LedgerEntry, MultiIndexPair, Polynomial, State};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const P: f64 = 2.0;
const BETA: f64 = 4.0;

/// Homogeneous degree-`r` real polynomial with structured coefficients of varied size.
fn structured_homogeneous(lattice: LatticeConfig, r: u32, terms: usize, rng: &mut ChaCha8Rng) -> Polynomial {
    let modes = lattice.modes();
    let mut p = Polynomial::zero(lattice);
    while p.len() < 2 * terms {
        let split = rng.gen_range(0..=r);
        let l: Vec<(i32, u32)> = (0..split).map(|_| (modes[rng.gen_range(0..modes.len())], 1)).collect();
        let k: Vec<(i32, u32)> = (split..r).map(|_| (modes[rng.gen_range(0..modes.len())], 1)).collect();
        let mi = MultiIndexPair::new(&l, &k);
        if mi == mi.swapped() {
            continue;
        }
        let v = Complex64::from_polar(10f64.powf(rng.gen_range(-2.0..1.0)), rng.gen_range(0.0..std::f64::consts::TAU));
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

/// Runs `count` (f, state) pairs and returns the worst ratios (vector field, bracket) of measured to bound.
fn worst_ratios(count: usize, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut vf, mut br) = (0.0f64, 0.0f64);
    for i in 0..count {
        let theta = (i % 2) as u8;
        let lattice = LatticeConfig::standard(theta, rng.gen_range(3..=6)).unwrap();
        let r = rng.gen_range(3..=5);
        let f = structured_homogeneous(lattice, r, rng.gen_range(1..6), &mut rng);
        let c_f = semi_bound_check(&f, BETA, 1.0).unwrap().minimal_c * (1.0 + 1e-12);
        assert!(semi_bound_check(&f, BETA, c_f).unwrap().passed());
        let s = State::random(lattice, P, rng.gen_range(0.05..2.0), rng.gen_range(-1.0..3.0), rng.gen());
        let form = SymplecticForm { theta };
        let x = hamiltonian_vector_field(&f, form, &s).norm(&lattice.modes(), P - 1.0);
        vf = vf.max(x / vector_field_bound(c_f, r, P, &s));
        let d = bracket_with_sobolev_sq(&f, P, form).eval(&s).norm();
        br = br.max(d / sobolev_bracket_bound(c_f, r, P, &s));
    }
    (vf, br)
}

#[test]
fn vector_field_and_sobolev_bracket_bounds_hold() {
    let (vf, br) = worst_ratios(200, 2024);
    assert!(vf <= 1.0, "vector field bound exceeded: ratio {vf}");
    assert!(br <= 1.0, "Sobolev bracket bound exceeded: ratio {br}");
}

#[test]
fn bounds_scale_homogeneously() {
    let lattice = LatticeConfig::standard(1, 4).unwrap();
    let s = State::random(lattice, P, 0.3, 1.0, 5);
    let t = s.scaled(2.0);
    let ratio = vector_field_bound(1.5, 4, P, &t) / vector_field_bound(1.5, 4, P, &s);
    assert!((ratio - 8.0).abs() < 1e-12);
    let ratio = sobolev_bracket_bound(1.5, 4, P, &t) / sobolev_bracket_bound(1.5, 4, P, &s);
    assert!((ratio - 16.0).abs() < 1e-12);
}

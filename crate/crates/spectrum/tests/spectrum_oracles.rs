use std::collections::BTreeSet;

use poly_core::{FrequencyVector, LatticeConfig, MultiIndexPair};
use proptest::prelude::*;
use spectrum::*;

/// Dense brute force over all exponent vectors, with the family predicate restated on dense arrays.
fn dense_oracle(r: u32, n: i32, theta: u8, j_max: i32) -> BTreeSet<MultiIndexPair> {
    let modes = LatticeConfig::standard(theta, j_max).unwrap().modes();
    let width = 2 * modes.len();
    let mut out = BTreeSet::new();
    let mut exps = vec![0u32; width];
    loop {
        let deg: u32 = exps.iter().sum();
        if (3..=r).contains(&deg) {
            let l = &exps[..modes.len()];
            let k = &exps[modes.len()..];
            let pos = |j: i32| modes.iter().position(|&x| x == j);
            let tail: u32 = modes.iter().enumerate().filter(|(_, j)| j.abs() > n).map(|(i, _)| l[i] + k[i]).sum();
            let diff = |j: i32| pos(j).map_or(0, |i| l[i] as i64 - k[i] as i64);
            let mirror = |keep: &dyn Fn(i32) -> bool| -> i64 {
                modes.iter().filter(|&&j| keep(j)).map(|&j| (diff(j) + diff(-j)).abs()).sum()
            };
            let ok = match tail {
                0 | 1 => {
                    if theta == 1 {
                        modes.iter().any(|&j| diff(j) != 0)
                    } else {
                        mirror(&|_| true) != 0
                    }
                }
                2 => mirror(&|j: i32| j.abs() > n) != 0,
                _ => false,
            };
            if ok {
                let lv: Vec<(i32, u32)> = modes.iter().zip(l).map(|(&j, &e)| (j, e)).collect();
                let kv: Vec<(i32, u32)> = modes.iter().zip(k).map(|(&j, &e)| (j, e)).collect();
                let mi = MultiIndexPair::new(&lv, &kv);
                out.insert(mi.clone().min(mi.swapped()));
            }
        }
        let mut i = 0;
        loop {
            if i == width {
                return out;
            }
            exps[i] += 1;
            if exps[i] <= r {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn enumeration_matches_dense_oracle() {
    for (theta, j_max, n, r) in [(0u8, 2, 1, 3), (1, 2, 1, 4), (1, 3, 2, 3), (0, 2, 2, 4)] {
        let fast: BTreeSet<_> = enumerate_o(r, n, theta, j_max, DEFAULT_BUDGET).unwrap().into_iter().collect();
        assert_eq!(fast, dense_oracle(r, n, theta, j_max), "theta {theta} J {j_max} N {n} r {r}");
    }
}

#[test]
fn enumeration_examples() {
    let o0 = enumerate_o(3, 2, 0, 3, DEFAULT_BUDGET).unwrap();
    let balanced = MultiIndexPair::new(&[(1, 1), (-1, 1)], &[(1, 2)]);
    assert!(!o0.iter().any(|m| *m == balanced || *m == balanced.swapped()));
    let o1 = enumerate_o(4, 2, 1, 3, DEFAULT_BUDGET).unwrap();
    assert!(o1.iter().all(|m| !m.is_diagonal()));
    let tail_balanced = MultiIndexPair::new(&[(3, 1), (1, 1)], &[(3, 1), (2, 1)]);
    assert!(!o1.iter().any(|m| *m == tail_balanced || *m == tail_balanced.swapped()));
    assert!(o1.iter().all(|m| m.tail_units(2) <= 2));
}

fn free(theta: u8, j_max: i32) -> FrequencyVector {
    let pot = Potential::zero(theta, 1.0, j_max).unwrap();
    frequencies(&pot).unwrap()
}

#[test]
fn scan_examples() {
    let omega = free(0, 4);
    let mi = MultiIndexPair::new(&[(1, 1), (2, 1)], &[(3, 1)]);
    assert_eq!(omega.small_divisor(&mi), 4.0);
    let find = |gamma: f64| {
        let rep = resonance_scan(&omega, 3, 2, ResonanceParams { gamma, alpha: 1.0 }, DEFAULT_BUDGET).unwrap();
        rep.violations.iter().any(|v| (v.l == mi.l_sparse() && v.k == mi.k_sparse()) || (v.k == mi.l_sparse() && v.l == mi.k_sparse()))
    };
    // M = 3, N^alpha = 2: resonant iff 4 <= 1.5 gamma.
    assert!(!find(2.6));
    assert!(find(2.667));
    assert!(find(3.0));

    let pot = sample_potential(1, 1.0, 5, 3).unwrap();
    let rep = resonance_scan(&frequencies(&pot).unwrap(), 4, 3, ResonanceParams { gamma: 0.0, alpha: 2.0 }, DEFAULT_BUDGET).unwrap();
    assert!(rep.is_nonresonant());
    assert!(rep.candidates > 0);
}

#[test]
fn measure_reproducible_and_limits() {
    let cfg = MeasureConfig { theta: 1, m: 1.0, r: 3, n: 3, alpha: 3.5, j_max: 6, samples: 300, seed: 11, budget: DEFAULT_BUDGET };
    let a = measure_sweep(&cfg, &[0.0, 1e-9, 0.05]).unwrap();
    let b = measure_sweep(&cfg, &[0.0, 1e-9, 0.05]).unwrap();
    assert_eq!(a, b);
    assert_eq!(a[0].failures, 0);
    assert_eq!(a[1].failures, 0);
    assert!(a[2].failures > 0);
    assert_eq!(measure_estimate(&cfg, 0.05).unwrap(), a[2]);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    assert_eq!(pool.install(|| critical_gammas(&cfg)).unwrap(), critical_gammas(&cfg).unwrap());
}

#[test]
fn measure_monotone_in_n_and_linear_in_gamma() {
    let gammas = [0.02, 0.04, 0.08];
    let mut prev: Option<Vec<MeasureEstimate>> = None;
    for n in [3, 4, 5] {
        let cfg = MeasureConfig { theta: 1, m: 1.0, r: 3, n, alpha: 3.5, j_max: 8, samples: 1000, seed: 5, budget: DEFAULT_BUDGET };
        let est = measure_sweep(&cfg, &gammas).unwrap();
        let ratio = doubling_ratio(&est).unwrap();
        assert!((1.5..=2.5).contains(&ratio), "N {n}: ratio {ratio}");
        if let Some(p) = &prev {
            for (a, b) in p.iter().zip(&est) {
                assert!(b.ci[0] <= a.ci[1], "N {n}: {b:?} exceeds {a:?}");
            }
        }
        prev = Some(est);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn theta0_frequencies_are_even(seed in any::<u64>(), m in 0.6f64..3.0) {
        let w = frequencies(&sample_potential(0, m, 6, seed).unwrap()).unwrap();
        for j in 1..=6 {
            prop_assert_eq!(w.get(j), w.get(-j));
        }
    }

    #[test]
    fn violations_grow_with_gamma(seed in any::<u64>(), g in 0.0f64..0.5, t in 1.0f64..4.0) {
        let omega = frequencies(&sample_potential(1, 1.0, 5, seed).unwrap()).unwrap();
        let small = resonance_scan(&omega, 3, 3, ResonanceParams { gamma: g, alpha: 2.0 }, DEFAULT_BUDGET).unwrap();
        let large = resonance_scan(&omega, 3, 3, ResonanceParams { gamma: g * t, alpha: 2.0 }, DEFAULT_BUDGET).unwrap();
        let key = |v: &Violation| (v.l.clone(), v.k.clone());
        let big: BTreeSet<_> = large.violations.iter().map(key).collect();
        prop_assert!(small.violations.iter().all(|v| big.contains(&key(v))));
        for v in &large.violations {
            prop_assert!(v.divisor.abs() <= v.threshold);
        }
    }

    #[test]
    fn emitted_pairs_satisfy_predicate(theta in 0u8..2, n in 1i32..4, r in 3u32..5) {
        for mi in enumerate_o(r, n, theta, 4, DEFAULT_BUDGET).unwrap() {
            prop_assert!(in_o_set(&mi, r, n, theta));
            prop_assert!(mi.max_abs_mode().unwrap() <= tail_cap(r, n, 4));
        }
    }
}

use poly_core::{LatticeConfig, MultiIndexPair};

use crate::error::{Result, SpectrumError};

/// Default cap on the number of candidate index pairs visited.
pub const DEFAULT_BUDGET: usize = 5_000_000;

/// Largest tail mode worth enumerating: `min(J, 4 r N^2)`.
pub fn tail_cap(r: u32, n: i32, j_max: i32) -> i32 {
    let cap = 4i64 * r as i64 * (n as i64).pow(2);
    cap.min(j_max as i64) as i32
}

fn mirror_sum(mi: &MultiIndexPair, filter: impl Fn(i32) -> bool) -> u64 {
    let mut total = 0u64;
    for &(j, _, _) in mi.entries() {
        if !filter(j) {
            continue;
        }
        let v = |x: i32| mi.l(x) as i64 - mi.k(x) as i64;
        let s = if j == 0 { 2 * v(0) } else { v(j) + v(-j) };
        total += s.unsigned_abs();
    }
    total
}

/// Membership in the index family `O_{r,N}` for the symplectic form `theta`.
pub fn in_o_set(mi: &MultiIndexPair, r: u32, n: i32, theta: u8) -> bool {
    let d = mi.degree();
    if d < 3 || d > r {
        return false;
    }
    match mi.tail_units(n) {
        0 | 1 => {
            if theta == 1 {
                mi.entries().iter().any(|&(_, a, b)| a != b)
            } else {
                mirror_sum(mi, |_| true) != 0
            }
        }
        2 => mirror_sum(mi, |j| j.abs() > n) != 0,
        _ => false,
    }
}

/// Every `(l,k)` in `O_{r,N}` with modes inside `|j| <= tail_cap`, one representative per
/// mirror pair `(l,k) ~ (k,l)`, in lexicographic order.
pub fn enumerate_o(r: u32, n: i32, theta: u8, j_max: i32, budget: usize) -> Result<Vec<MultiIndexPair>> {
    if r < 3 {
        return Err(SpectrumError::InvalidRequest(format!("degree bound r = {r} < 3")));
    }
    if n < 1 || n > j_max {
        return Err(SpectrumError::InvalidRequest(format!("N = {n} outside [1, J = {j_max}]")));
    }
    let lattice = LatticeConfig::standard(theta, j_max)?;
    let cap = tail_cap(r, n, j_max);
    let slots: Vec<(i32, bool)> =
        lattice.modes().into_iter().filter(|j| j.abs() <= cap).flat_map(|j| [(j, false), (j, true)]).collect();
    let mut out = Vec::new();
    let mut visited = 0usize;
    let mut chosen: Vec<usize> = Vec::new();
    for d in 3..=r {
        walk(&slots, n, d as usize, 0, 0, &mut chosen, &mut |picked| {
            visited += 1;
            if visited > budget {
                return Err(SpectrumError::BudgetExceeded { budget });
            }
            let mut triples: Vec<(i32, u32, u32)> = Vec::with_capacity(picked.len());
            for &s in picked {
                let (j, conj) = slots[s];
                triples.push((j, u32::from(!conj), u32::from(conj)));
            }
            let mi = MultiIndexPair::from_triples(triples);
            if mi < mi.swapped() && in_o_set(&mi, r, n, theta) {
                out.push(mi);
            }
            Ok(())
        })?;
    }
    out.sort();
    Ok(out)
}

fn walk(
    slots: &[(i32, bool)],
    n: i32,
    remaining: usize,
    start: usize,
    tail: u32,
    chosen: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    if remaining == 0 {
        return visit(chosen);
    }
    for s in start..slots.len() {
        let t = tail + u32::from(slots[s].0.abs() > n);
        if t > 2 {
            continue;
        }
        chosen.push(s);
        walk(slots, n, remaining - 1, s, t, chosen, visit)?;
        chosen.pop();
    }
    Ok(())
}

//! Sparse exponent pairs `(l, k)` describing the monomial `u^l ubar^k`.

use serde::{Deserialize, Serialize};
use std::fmt;

/// A monomial `u^l ubar^k` stored as sorted `(mode, l_j, k_j)` triples with
/// `l_j + k_j > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
pub struct MultiIndexPair {
    entries: Vec<(i32, u32, u32)>,
}

/// Sparse exponent vector as `(mode, exponent)` pairs with positive exponents.
pub type SparseExp = Vec<(i32, u32)>;

impl MultiIndexPair {
    pub fn one() -> Self {
        Self::default()
    }

    /// Builds a pair from sparse `l` and `k` maps. Repeated modes are summed.
    pub fn new(l: &[(i32, u32)], k: &[(i32, u32)]) -> Self {
        let mut entries: Vec<(i32, u32, u32)> = Vec::with_capacity(l.len() + k.len());
        for &(j, e) in l {
            entries.push((j, e, 0));
        }
        for &(j, e) in k {
            entries.push((j, 0, e));
        }
        Self::from_triples(entries)
    }

    /// Builds from unsorted, possibly repeated triples.
    pub fn from_triples(mut raw: Vec<(i32, u32, u32)>) -> Self {
        raw.sort_unstable_by_key(|t| t.0);
        let mut entries: Vec<(i32, u32, u32)> = Vec::with_capacity(raw.len());
        for (j, a, b) in raw {
            match entries.last_mut() {
                Some(last) if last.0 == j => {
                    last.1 += a;
                    last.2 += b;
                }
                _ => entries.push((j, a, b)),
            }
        }
        entries.retain(|t| t.1 + t.2 > 0);
        MultiIndexPair { entries }
    }

    pub fn entries(&self) -> &[(i32, u32, u32)] {
        &self.entries
    }

    pub fn l(&self, j: i32) -> u32 {
        self.find(j).map_or(0, |t| t.1)
    }

    pub fn k(&self, j: i32) -> u32 {
        self.find(j).map_or(0, |t| t.2)
    }

    fn find(&self, j: i32) -> Option<&(i32, u32, u32)> {
        self.entries.binary_search_by_key(&j, |t| t.0).ok().map(|p| &self.entries[p])
    }

    pub fn l_sparse(&self) -> SparseExp {
        self.entries.iter().filter(|t| t.1 > 0).map(|t| (t.0, t.1)).collect()
    }

    pub fn k_sparse(&self) -> SparseExp {
        self.entries.iter().filter(|t| t.2 > 0).map(|t| (t.0, t.2)).collect()
    }

    /// `|l + k|`.
    pub fn degree(&self) -> u32 {
        self.entries.iter().map(|t| t.1 + t.2).sum()
    }

    /// `M(l,k) = sum_j j (l_j - k_j)`.
    pub fn momentum(&self) -> i64 {
        self.entries.iter().map(|&(j, a, b)| j as i64 * (a as i64 - b as i64)).sum()
    }

    /// The mirrored pair `(k, l)`.
    pub fn swapped(&self) -> Self {
        MultiIndexPair { entries: self.entries.iter().map(|&(j, a, b)| (j, b, a)).collect() }
    }

    /// Number of exponent units on modes with `|j| > n`.
    pub fn tail_units(&self, n: i32) -> u32 {
        self.entries.iter().filter(|t| t.0.abs() > n).map(|t| t.1 + t.2).sum()
    }

    /// Largest `|j|` in the support, or `None` for the constant monomial.
    pub fn max_abs_mode(&self) -> Option<i32> {
        self.entries.iter().map(|t| t.0.abs()).max()
    }

    pub fn modes(&self) -> impl Iterator<Item = i32> + '_ {
        self.entries.iter().map(|t| t.0)
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries.iter().all(|t| t.1 == t.2)
    }

    /// `l! k!`.
    pub fn factorial_weight(&self) -> f64 {
        self.entries.iter().map(|t| factorial(t.1) * factorial(t.2)).product()
    }

    /// `prod_j <j>^{(l_j + k_j)/2}`.
    pub fn bracket_weight(&self) -> f64 {
        self.entries
            .iter()
            .map(|&(j, a, b)| crate::lattice::bracket_j(j).powf(0.5 * (a + b) as f64))
            .product()
    }

    /// Product `u^l ubar^k` with another monomial.
    pub fn mul(&self, other: &Self) -> Self {
        let mut raw = self.entries.clone();
        raw.extend_from_slice(&other.entries);
        Self::from_triples(raw)
    }

    /// Lowers `l_j` by one when `dl` is set, `k_j` by one when `dk` is set.
    pub fn lowered(&self, j: i32, dl: bool, dk: bool) -> Option<Self> {
        let pos = self.entries.binary_search_by_key(&j, |t| t.0).ok()?;
        let mut entries = self.entries.clone();
        let t = &mut entries[pos];
        if dl {
            t.1 = t.1.checked_sub(1)?;
        }
        if dk {
            t.2 = t.2.checked_sub(1)?;
        }
        if t.1 + t.2 == 0 {
            entries.remove(pos);
        }
        Some(MultiIndexPair { entries })
    }
}

impl fmt::Display for MultiIndexPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for &(j, a, b) in &self.entries {
            for (e, name) in [(a, "u"), (b, "ū")] {
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "·")?;
                }
                first = false;
                write!(f, "{name}[{j}]")?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// Momentum of a sparse pair `(l0, k0)`.
pub fn sparse_momentum(l: &[(i32, u32)], k: &[(i32, u32)]) -> i64 {
    let a: i64 = l.iter().map(|&(j, e)| j as i64 * e as i64).sum();
    let b: i64 = k.iter().map(|&(j, e)| j as i64 * e as i64).sum();
    a - b
}

/// Canonical form of a sparse exponent vector: sorted, merged, positive.
pub fn canonical_sparse(mut v: SparseExp) -> SparseExp {
    v.sort_unstable_by_key(|t| t.0);
    let mut out: SparseExp = Vec::with_capacity(v.len());
    for (j, e) in v {
        match out.last_mut() {
            Some(last) if last.0 == j => last.1 += e,
            _ => out.push((j, e)),
        }
    }
    out.retain(|t| t.1 > 0);
    out
}

pub fn sparse_get(v: &[(i32, u32)], j: i32) -> u32 {
    v.binary_search_by_key(&j, |t| t.0).map_or(0, |p| v[p].1)
}

/// `a + b - c` componentwise where `c` is a single unit vector `e_j` (when given).
pub fn sparse_add_sub(a: &[(i32, u32)], b: &[(i32, u32)], minus_unit: Option<i32>) -> Option<SparseExp> {
    let mut raw: Vec<(i32, i64)> = a.iter().map(|&(j, e)| (j, e as i64)).collect();
    raw.extend(b.iter().map(|&(j, e)| (j, e as i64)));
    if let Some(j) = minus_unit {
        raw.push((j, -1));
    }
    raw.sort_unstable_by_key(|t| t.0);
    let mut out: SparseExp = Vec::with_capacity(raw.len());
    let mut acc: Option<(i32, i64)> = None;
    for (j, e) in raw {
        match acc {
            Some((aj, ae)) if aj == j => acc = Some((aj, ae + e)),
            Some((aj, ae)) => {
                if ae < 0 {
                    return None;
                }
                if ae > 0 {
                    out.push((aj, ae as u32));
                }
                acc = Some((j, e));
            }
            None => acc = Some((j, e)),
        }
    }
    if let Some((aj, ae)) = acc {
        if ae < 0 {
            return None;
        }
        if ae > 0 {
            out.push((aj, ae as u32));
        }
    }
    Some(out)
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

use crate::mono::MultiIndexPair;
use crate::polynomial::Polynomial;

/// Membership predicate of `Gamma^N_{<=2}`: at most two exponent units on
/// modes `|j| > N` and `|M(l,k)| <= N`.
pub fn in_gamma_le2(mi: &MultiIndexPair, n: i32) -> bool {
    mi.tail_units(n) <= 2 && mi.momentum().abs() <= n as i64
}

/// Keeps the terms of `f` selected by `Gamma^N_{<=2}`. Structure is preserved.
pub fn gamma_le2(f: &Polynomial, n: i32) -> Polynomial {
    f.filter(|m, _| in_gamma_le2(m, n))
}

/// The complement `f - Gamma^N_{<=2} f`.
pub fn gamma_gt2(f: &Polynomial, n: i32) -> Polynomial {
    f.filter(|m, _| !in_gamma_le2(m, n))
}

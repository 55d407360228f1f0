use super::{CoefficientSeries, Normalization, SpectralData, Values};
use crate::error::{Error, Result};

// Nonzero coefficients of Π_{m≥1}(1 − q^m) up to q^limit, by Euler's
// pentagonal number theorem.
fn pentagonal_terms(limit: usize) -> Vec<(usize, i128)> {
    let mut out = Vec::new();
    for j in 1usize.. {
        let g1 = j * (3 * j - 1) / 2;
        if g1 > limit {
            break;
        }
        let sign = if j % 2 == 1 { -1 } else { 1 };
        out.push((g1, sign));
        let g2 = j * (3 * j + 1) / 2;
        if g2 <= limit {
            out.push((g2, sign));
        }
    }
    out.sort_unstable();
    out
}

/// Ramanujan's τ(n) for `1 ≤ n ≤ N`, exactly.
///
/// With P = Π(1 − q^m) and f = P^{24}, the relation P f′ = 24 P′ f gives
/// n f_n = Σ_{k≥1} (25k − n) p_k f_{n−k}, where only the O(√n) pentagonal
/// exponents k contribute. Then τ(n) = f_{n−1}.
pub fn delta_coefficients(count: usize) -> Result<CoefficientSeries> {
    if count == 0 {
        return Err(Error::domain("coefficient count must be at least 1"));
    }
    let pent = pentagonal_terms(count);
    let mut f: Vec<i128> = Vec::with_capacity(count);
    f.push(1);
    for n in 1..count {
        let mut acc: i128 = 0;
        for &(k, p) in &pent {
            if k > n {
                break;
            }
            let weight = 25 * k as i128 - n as i128;
            let term = (weight * p)
                .checked_mul(f[n - k])
                .ok_or(Error::Overflow("tau recurrence"))?;
            acc = acc.checked_add(term).ok_or(Error::Overflow("tau recurrence"))?;
        }
        debug_assert_eq!(acc % n as i128, 0);
        f.push(acc / n as i128);
    }
    let mut series = CoefficientSeries::new(
        SpectralData::Holomorphic { weight: 12 },
        Values::Integer(f),
        Normalization::Arithmetic,
    );
    series.hecke_normalized = true;
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{check_hecke_relations, gcd};
    use proptest::prelude::*;

    // q Π(1−q^m)^{24} by plain truncated polynomial multiplication
    fn brute_force(count: usize) -> Vec<i128> {
        let mut p = vec![0i128; count];
        p[0] = 1;
        for m in 1..count {
            for i in (m..count).rev() {
                p[i] -= p[i - m];
            }
        }
        let mut f = vec![0i128; count];
        f[0] = 1;
        for _ in 0..24 {
            let mut g = vec![0i128; count];
            for (i, &a) in f.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (j, &b) in p.iter().enumerate().take(count - i) {
                    g[i + j] += a * b;
                }
            }
            f = g;
        }
        f
    }

    #[test]
    fn first_values() {
        let s = delta_coefficients(10).unwrap();
        let want = [1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920];
        for (n, w) in want.iter().enumerate() {
            assert_eq!(s.integer(n + 1), Some(*w));
        }
    }

    #[test]
    fn matches_direct_product() {
        let n = 300;
        let s = delta_coefficients(n).unwrap();
        let brute = brute_force(n);
        for k in 1..=n {
            assert_eq!(s.integer(k), Some(brute[k - 1]), "n = {k}");
        }
    }

    #[test]
    fn hecke_relations_exact_to_ten_thousand() {
        let s = delta_coefficients(10_000).unwrap();
        let r = check_hecke_relations(&s);
        assert!(r.exact);
        assert_eq!(r.max_residual(), 0.0);
        assert!(r.relations_tested > 10_000);
    }

    #[test]
    fn large_range_stays_exact() {
        // the recurrence must not overflow at the lengths used for
        // Rankin–Selberg series
        let s = delta_coefficients(100_000).unwrap();
        // τ(p) for a prime near the end, against Deligne's bound
        let p = 99_991usize;
        let t = s.integer(p).unwrap() as f64;
        assert!(t.abs() <= 2.0 * (p as f64).powf(5.5));
        // multiplicativity across the whole range
        assert_eq!(s.integer(99_990).unwrap(), s.integer(9_999).unwrap() * s.integer(10).unwrap());
    }

    proptest! {
        #[test]
        fn multiplicative_on_coprime_pairs(m in 1usize..100, n in 1usize..100) {
            prop_assume!(gcd(m as u128, n as u128) == 1);
            let s = delta_coefficients(10_000).unwrap();
            prop_assert_eq!(s.integer(m * n).unwrap(), s.integer(m).unwrap() * s.integer(n).unwrap());
        }
    }
}

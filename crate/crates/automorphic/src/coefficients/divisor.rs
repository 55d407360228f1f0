use super::{CoefficientSeries, ConstantTerm, Normalization, Rational, SpectralData, Values};
use crate::error::{Error, Result};
use crate::numerics::{c, riemann_zeta, Complex};

// B_k as num/den for even k ≤ 40
const BERNOULLI: [(i128, i128); 20] = [
    (1, 6),
    (-1, 30),
    (1, 42),
    (-1, 30),
    (5, 66),
    (-691, 2730),
    (7, 6),
    (-3617, 510),
    (43867, 798),
    (-174611, 330),
    (854513, 138),
    (-236364091, 2730),
    (8553103, 6),
    (-23749461029, 870),
    (8615841276005, 14322),
    (-7709321041217, 510),
    (2577687858367, 6),
    (-26315271553053477373, 1919190),
    (2929993913841559, 6),
    (-261082718496449122051, 13530),
];

/// The constant `−2k/B_k` in E_k = 1 + c_k Σ σ_{k−1}(n) qⁿ, for even
/// `4 ≤ k ≤ 40`.
pub fn eisenstein_constant(k: u32) -> Result<Rational> {
    if k % 2 != 0 || k < 4 {
        return Err(Error::domain(format!("Eisenstein weight must be even and ≥ 4, got {k}")));
    }
    let (num, den) = *BERNOULLI
        .get(k as usize / 2 - 1)
        .ok_or_else(|| Error::domain(format!("Eisenstein weight {k} above the tabulated 40")))?;
    let top = (-2 * k as i128).checked_mul(den).ok_or(Error::Overflow("Eisenstein constant"))?;
    Rational::new(top, num)
}

/// σ_e(n) = Σ_{d|n} d^e, exact.
pub fn sigma(e: u32, n: u64) -> Result<i128> {
    if n == 0 {
        return Err(Error::domain("sigma of 0"));
    }
    let mut total: i128 = 0;
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            for q in [d, n / d] {
                let p = (q as i128).checked_pow(e).ok_or(Error::Overflow("divisor sum"))?;
                total = total.checked_add(p).ok_or(Error::Overflow("divisor sum"))?;
                if d * d == n {
                    break;
                }
            }
        }
        d += 1;
    }
    Ok(total)
}

/// q-expansion of the weight `k` Eisenstein series: stored values are the
/// exact divisor sums σ_{k−1}(n), the scale is c_k and b_0 = 1.
pub fn eisenstein_qcoeffs(k: u32, count: usize) -> Result<CoefficientSeries> {
    let scale = eisenstein_constant(k)?;
    if count == 0 {
        return Err(Error::domain("coefficient count must be at least 1"));
    }
    let mut v = vec![0i128; count];
    for d in 1..=count {
        let p = (d as i128).checked_pow(k - 1).ok_or(Error::Overflow("divisor sum"))?;
        for m in (d..=count).step_by(d) {
            v[m - 1] = v[m - 1].checked_add(p).ok_or(Error::Overflow("divisor sum"))?;
        }
    }
    let mut s = CoefficientSeries::new(SpectralData::Holomorphic { weight: k }, Values::Integer(v), Normalization::Arithmetic);
    s.scale = scale;
    s.constant_term = ConstantTerm::Value(c(1.0, 0.0));
    Ok(s)
}

/// a_n = Σ_{d|n} d^{−ν} with a_0 = ζ(ν) reported separately (a pole at
/// ν = 1). Tagged as an even spectral object with parameter ν.
pub fn divisor_power_coeffs(nu: Complex, count: usize) -> Result<CoefficientSeries> {
    if count == 0 {
        return Err(Error::domain("coefficient count must be at least 1"));
    }
    let mut v = vec![c(0.0, 0.0); count];
    for d in 1..=count {
        let p = (-nu * (d as f64).ln()).exp();
        for m in (d..=count).step_by(d) {
            v[m - 1] += p;
        }
    }
    let constant_term = match riemann_zeta(nu) {
        Ok(z) => ConstantTerm::Value(z),
        Err(Error::Pole { .. }) => ConstantTerm::Pole,
        Err(e) => return Err(e),
    };
    let mut s = CoefficientSeries::new(SpectralData::maass(nu, 0)?, Values::Complex(v), Normalization::Arithmetic);
    s.constant_term = constant_term;
    s.hecke_normalized = true;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::gcd;
    use proptest::prelude::*;

    #[test]
    fn small_divisor_sums() {
        let s = eisenstein_qcoeffs(4, 6).unwrap();
        assert_eq!(s.integer(1), Some(1));
        assert_eq!(s.integer(4), Some(73));
        assert_eq!(s.integer(6), Some(252));
        assert_eq!(s.scale, Rational { num: 240, den: 1 });
        assert_eq!(s.constant_term, ConstantTerm::Value(c(1.0, 0.0)));
        assert_eq!(sigma(3, 6).unwrap(), 252);
        assert_eq!(sigma(0, 36).unwrap(), 9);
    }

    #[test]
    fn eisenstein_constants() {
        assert_eq!(eisenstein_constant(6).unwrap(), Rational { num: -504, den: 1 });
        assert_eq!(eisenstein_constant(12).unwrap(), Rational { num: 65520, den: 691 });
        assert!(eisenstein_constant(5).is_err());
        assert!(eisenstein_qcoeffs(7, 3).is_err());
    }

    #[test]
    fn sieve_matches_enumeration() {
        let s = eisenstein_qcoeffs(8, 500).unwrap();
        for n in 1..=500u64 {
            assert_eq!(s.integer(n as usize).unwrap(), sigma(7, n).unwrap());
        }
    }

    #[test]
    fn divisor_power_values() {
        let s = divisor_power_coeffs(c(1.0, 0.0), 6).unwrap();
        assert!((s.get(6).unwrap() - c(2.0, 0.0)).norm() < 1e-15);
        assert_eq!(s.constant_term, ConstantTerm::Pole);
        let nu = c(0.3, 1.7);
        let s = divisor_power_coeffs(nu, 7).unwrap();
        assert!((s.get(1).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        let want = 1.0 + (-nu * 7f64.ln()).exp();
        assert!((s.get(7).unwrap() - want).norm() < 1e-15);
        let two = divisor_power_coeffs(c(2.0, 0.0), 1).unwrap();
        match two.constant_term {
            ConstantTerm::Value(z) => assert!((z.re - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-14),
            other => panic!("{other:?}"),
        }
    }

    proptest! {
        #[test]
        fn sigma_multiplicative(m in 1u64..500, n in 1u64..500, e in 0u32..6) {
            prop_assume!(gcd(m as u128, n as u128) == 1);
            prop_assert_eq!(sigma(e, m * n).unwrap(), sigma(e, m).unwrap() * sigma(e, n).unwrap());
        }

        #[test]
        fn divisor_reflection_shadow(n in 1usize..10_000, re in -3.0f64..3.0, im in -3.0f64..3.0) {
            let nu = c(re, im);
            prop_assume!(nu.norm() <= 3.0);
            let plus = divisor_power_coeffs(-nu, n).unwrap().get(n).unwrap();
            let minus = divisor_power_coeffs(nu, n).unwrap().get(n).unwrap();
            let lhs = (-nu * (n as f64).ln()).exp() * plus;
            // relative to Σ|d^{−ν}|: for imaginary ν the sum itself can cancel
            let scale = divisor_power_coeffs(c(nu.re, 0.0), n).unwrap().get(n).unwrap().re;
            prop_assert!((lhs - minus).norm() <= 1e-14 * scale);
        }
    }
}

//! Fourier and Dirichlet coefficient data for the automorphic objects used
//! elsewhere in the crate: generation, ingestion, Hecke checks and a
//! checksummed on-disk cache.

mod cache;
mod divisor;
mod hecke;
mod maass;
mod tau;

pub use cache::{cache_load, cache_store, CACHE_VERSION};
pub use divisor::{divisor_power_coeffs, eisenstein_constant, eisenstein_qcoeffs, sigma};
pub use hecke::{check_hecke_relations, HeckeReport};
pub use maass::{load_maass_coefficients, parse_maass_coefficients, HECKE_WARN_THRESHOLD};
pub use tau::delta_coefficients;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extsquare::gl4_duality_signs;
use crate::numerics::{c, Complex};

/// Which automorphic object a coefficient sequence belongs to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SpectralData {
    /// Holomorphic modular form of even weight `k ≥ 4` for SL(2, Z).
    Holomorphic { weight: u32 },
    /// Maass form (or Eisenstein series) with spectral parameter `λ`; the
    /// Laplace eigenvalue is `(1 − λ²)/4`, so `λ = 2iR` for a tempered form.
    Maass { lambda: Complex, parity: u8 },
    /// GL(4) data with `Σμ = 0` and `Ση ≡ 0 mod 2`.
    Gl4 { mu: [Complex; 4], eta: [u8; 4] },
}

impl SpectralData {
    pub fn holomorphic(weight: u32) -> Result<Self> {
        let s = SpectralData::Holomorphic { weight };
        s.validate()?;
        Ok(s)
    }

    pub fn maass(lambda: Complex, parity: u8) -> Result<Self> {
        let s = SpectralData::Maass { lambda, parity };
        s.validate()?;
        Ok(s)
    }

    pub fn gl4(mu: [Complex; 4], eta: [u8; 4]) -> Result<Self> {
        let s = SpectralData::Gl4 { mu, eta };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            SpectralData::Holomorphic { weight } => {
                if *weight < 4 || weight % 2 != 0 {
                    return Err(Error::domain(format!(
                        "holomorphic weight must be even and at least 4, got {weight}"
                    )));
                }
            }
            SpectralData::Maass { lambda, parity } => {
                if *parity > 1 {
                    return Err(Error::domain(format!("parity must be 0 or 1, got {parity}")));
                }
                if !(lambda.re.is_finite() && lambda.im.is_finite()) {
                    return Err(Error::domain("non-finite spectral parameter"));
                }
            }
            SpectralData::Gl4 { mu, eta } => {
                if eta.iter().any(|&e| e > 1) {
                    return Err(Error::domain(format!("eta entries must be 0 or 1, got {eta:?}")));
                }
                if eta.iter().map(|&e| e as u32).sum::<u32>() % 2 != 0 {
                    return Err(Error::domain(format!("eta must sum to 0 mod 2, got {eta:?}")));
                }
                let sum: Complex = mu.iter().sum();
                let scale = mu.iter().map(|m| m.norm()).sum::<f64>().max(1.0);
                if sum.norm() > 1e-12 * scale {
                    return Err(Error::domain(format!("mu must sum to 0, got sum {sum}")));
                }
            }
        }
        Ok(())
    }

    /// The GL(2) parity `η`; holomorphic forms are even.
    pub fn parity(&self) -> Option<u8> {
        match self {
            SpectralData::Holomorphic { .. } => Some(0),
            SpectralData::Maass { parity, .. } => Some(*parity),
            SpectralData::Gl4 { .. } => None,
        }
    }
}

/// Coefficient scaling convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Normalization {
    /// Classical integral coefficients, e.g. τ(n); Hecke relations carry
    /// `p^{k−1}` for weight `k`.
    Arithmetic,
    /// Coefficients divided by `n^{(k−1)/2}`; Hecke relations carry no power.
    Unitary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Values {
    Integer(Vec<i128>),
    Complex(Vec<Complex>),
}

impl Values {
    pub fn len(&self) -> usize {
        match self {
            Values::Integer(v) => v.len(),
            Values::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Exact rational `num/den` with `den > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rational {
    pub num: i128,
    pub den: i128,
}

impl Rational {
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    pub fn new(num: i128, den: i128) -> Result<Self> {
        if den == 0 {
            return Err(Error::domain("zero denominator"));
        }
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()) as i128;
        let sign = if den < 0 { -1 } else { 1 };
        Ok(Rational {
            num: sign * num / g,
            den: sign * den / g,
        })
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl std::fmt::Display for Rational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

pub(crate) fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

/// The zeroth coefficient, kept apart from the indexed values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ConstantTerm {
    Zero,
    Value(Complex),
    Pole,
}

/// Coefficients `a_n`, `1 ≤ n ≤ N`, with their normalization metadata.
/// The stored values are multiplied by `scale` on access; negative indices
/// are never stored and come from [`apply_parity`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSeries {
    pub spectral: SpectralData,
    pub values: Values,
    pub normalization: Normalization,
    pub hecke_normalized: bool,
    pub scale: Rational,
    pub constant_term: ConstantTerm,
    pub warnings: Vec<String>,
}

impl CoefficientSeries {
    pub fn new(spectral: SpectralData, values: Values, normalization: Normalization) -> Self {
        CoefficientSeries {
            spectral,
            values,
            normalization,
            hecke_normalized: false,
            scale: Rational::ONE,
            constant_term: ConstantTerm::Zero,
            warnings: Vec::new(),
        }
    }

    /// Series of `n` zero coefficients.
    pub fn zeros(spectral: SpectralData, n: usize) -> Self {
        CoefficientSeries::new(spectral, Values::Complex(vec![c(0.0, 0.0); n]), Normalization::Arithmetic)
    }

    /// N, the largest stored index.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `a_n` including the scale factor, for `1 ≤ n ≤ N`.
    pub fn get(&self, n: usize) -> Option<Complex> {
        if n == 0 {
            return None;
        }
        let s = self.scale.to_f64();
        match &self.values {
            Values::Integer(v) => v.get(n - 1).map(|&x| c(x as f64 * s, 0.0)),
            Values::Complex(v) => v.get(n - 1).map(|&x| x * s),
        }
    }

    /// Exact stored integer at `n`, before scaling.
    pub fn integer(&self, n: usize) -> Option<i128> {
        match &self.values {
            Values::Integer(v) if n >= 1 => v.get(n - 1).copied(),
            _ => None,
        }
    }

    /// All scaled coefficients as complex numbers, index 0 holding `a_1`.
    pub fn to_complex(&self) -> Vec<Complex> {
        (1..=self.len()).map(|n| self.get(n).expect("in range")).collect()
    }

    pub fn is_cuspidal(&self) -> bool {
        matches!(self.constant_term, ConstantTerm::Zero)
    }

    /// The same series in unitary normalization, `a_n / n^{(k−1)/2}`.
    pub fn to_unitary(&self) -> CoefficientSeries {
        let shift = match (&self.spectral, self.normalization) {
            (SpectralData::Holomorphic { weight }, Normalization::Arithmetic) => (*weight as f64 - 1.0) / 2.0,
            _ => return self.clone(),
        };
        let values = (1..=self.len())
            .map(|n| self.get(n).expect("in range") / (n as f64).powf(shift))
            .collect();
        CoefficientSeries {
            values: Values::Complex(values),
            normalization: Normalization::Unitary,
            scale: Rational::ONE,
            ..self.clone()
        }
    }
}

/// Index into a coefficient family that may be negative in some slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignedIndex {
    /// GL(2) index `n ≠ 0`.
    Single(i64),
    /// GL(4) index `(n₁, n₂, n₃)`; only `|n₁| = |n₃| = 1` is stored.
    Triple([i64; 3]),
}

/// Coefficient at a signed index, reconstructed from the stored positive
/// one by the parity rule: `a_{−n} = (−1)^η a_n` on GL(2), and the sign
/// `ε₁^{η₁} ε₂^{η₁+η₂} ε₃^{η₁+η₂+η₃}` on GL(4).
pub fn apply_parity(series: &CoefficientSeries, index: SignedIndex) -> Result<Complex> {
    match (index, &series.spectral) {
        (SignedIndex::Single(n), _) if series.spectral.parity().is_some() => {
            if n == 0 {
                return Err(Error::domain("index 0 is the constant term; cusp data has none"));
            }
            let m = n.unsigned_abs() as usize;
            let v = series
                .get(m)
                .ok_or_else(|| Error::domain(format!("index {n} beyond stored range {}", series.len())))?;
            let odd = series.spectral.parity() == Some(1);
            Ok(if n < 0 && odd { -v } else { v })
        }
        (SignedIndex::Triple(idx), SpectralData::Gl4 { eta, .. }) => {
            if idx.contains(&0) {
                return Err(Error::domain("GL(4) indices must be nonzero"));
            }
            if idx[0].abs() != 1 || idx[2].abs() != 1 {
                return Err(Error::domain(format!(
                    "only indices (±1, n, ±1) are stored, got {idx:?}"
                )));
            }
            let m = idx[1].unsigned_abs() as usize;
            let v = series
                .get(m)
                .ok_or_else(|| Error::domain(format!("index {} beyond stored range {}", idx[1], series.len())))?;
            let eps = [idx[0].signum() as i8, idx[1].signum() as i8, idx[2].signum() as i8];
            Ok(v * gl4_duality_signs(*eta, eps) as f64)
        }
        _ => Err(Error::domain("index shape does not match the spectral data")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gl2(parity: u8, a3: Complex) -> CoefficientSeries {
        let mut v = vec![c(1.0, 0.0); 3];
        v[2] = a3;
        CoefficientSeries::new(
            SpectralData::maass(c(0.0, 2.0), parity).unwrap(),
            Values::Complex(v),
            Normalization::Unitary,
        )
    }

    #[test]
    fn gl2_parity_signs() {
        let a = c(2.0, 1.0);
        assert_eq!(apply_parity(&gl2(0, a), SignedIndex::Single(-3)).unwrap(), a);
        assert_eq!(apply_parity(&gl2(1, a), SignedIndex::Single(-3)).unwrap(), -a);
        assert_eq!(apply_parity(&gl2(1, a), SignedIndex::Single(3)).unwrap(), a);
        assert!(matches!(apply_parity(&gl2(0, a), SignedIndex::Single(0)), Err(Error::Domain(_))));
        assert!(apply_parity(&gl2(0, a), SignedIndex::Single(4)).is_err());
    }

    #[test]
    fn gl4_parity_sign() {
        let z = c(0.0, 0.0);
        let spec = SpectralData::gl4([z; 4], [1, 0, 0, 1]).unwrap();
        let cc = c(0.3, -1.1);
        let s = CoefficientSeries::new(spec, Values::Complex(vec![c(1.0, 0.0), cc]), Normalization::Unitary);
        assert_eq!(apply_parity(&s, SignedIndex::Triple([1, 2, 1])).unwrap(), cc);
        assert_eq!(apply_parity(&s, SignedIndex::Triple([-1, 2, 1])).unwrap(), -cc);
        assert!(apply_parity(&s, SignedIndex::Triple([2, 2, 1])).is_err());
        assert!(apply_parity(&s, SignedIndex::Single(2)).is_err());
    }

    #[test]
    fn spectral_validation() {
        assert!(SpectralData::holomorphic(12).is_ok());
        assert!(SpectralData::holomorphic(13).is_err());
        assert!(SpectralData::holomorphic(2).is_err());
        assert!(SpectralData::maass(c(0.0, 1.0), 2).is_err());
        let z = c(0.0, 0.0);
        assert!(SpectralData::gl4([c(0.1, 0.0), z, z, z], [0; 4]).is_err());
        assert!(SpectralData::gl4([z; 4], [1, 0, 0, 0]).is_err());
    }

    #[test]
    fn rational_reduces() {
        let r = Rational::new(-24, -36).unwrap();
        assert_eq!(r, Rational { num: 2, den: 3 });
        assert_eq!(Rational::new(5, -10).unwrap().to_string(), "-1/2");
    }

    proptest! {
        #[test]
        fn parity_is_an_involution(re in -5.0f64..5.0, im in -5.0f64..5.0, parity in 0u8..2, n in 1i64..4) {
            let s = gl2(parity, c(re, im));
            let once = apply_parity(&s, SignedIndex::Single(-n)).unwrap();
            // reflect the reflected value back
            let flipped = if parity == 1 { -once } else { once };
            prop_assert_eq!(flipped, s.get(n as usize).unwrap());
        }

        #[test]
        fn gl4_sign_twice_is_identity(e0 in 0u8..2, e1 in 0u8..2, e2 in 0u8..2, s0 in any::<bool>(), s1 in any::<bool>(), s2 in any::<bool>()) {
            let e3 = (e0 + e1 + e2) % 2;
            let eps = [if s0 { 1 } else { -1 }, if s1 { 1 } else { -1 }, if s2 { 1 } else { -1 }];
            let sign = gl4_duality_signs([e0, e1, e2, e3], eps);
            prop_assert_eq!(sign * sign, 1);
        }
    }
}

use super::{c, check_finite, complex_gamma, sin_pi, Complex, PI, TAU};
use crate::error::{Error, Result};

// B_{2k} / (2k)!, k = 1..30
const BERNOULLI_OVER_FACTORIAL: [f64; 30] = [
    8.333_333_333_333_333e-2,
    -1.388_888_888_888_889e-3,
    3.306_878_306_878_307e-5,
    -8.267_195_767_195_768e-7,
    2.087_675_698_786_81e-8,
    -5.284_190_138_687_493e-10,
    1.338_253_653_068_468e-11,
    -3.389_680_296_322_583e-13,
    8.586_062_056_277_845e-15,
    -2.174_868_698_558_062e-16,
    5.509_002_828_360_23e-18,
    -1.395_446_468_581_252e-19,
    3.534_707_039_629_467e-21,
    -8.953_517_427_037_546e-23,
    2.267_952_452_337_683e-24,
    -5.744_790_668_872_202e-26,
    1.455_172_475_614_865e-27,
    -3.685_994_940_665_31e-29,
    9.336_734_257_095_045e-31,
    -2.365_022_415_700_63e-32,
    5.990_671_762_482_134e-34,
    -1.517_454_884_468_29e-35,
    3.843_758_125_454_189e-37,
    -9.736_353_072_646_691e-39,
    2.466_247_044_200_681e-40,
    -6.247_076_741_820_743e-42,
    1.582_403_024_464_491e-43,
    -4.008_273_685_948_936e-45,
    1.015_307_585_556_956e-46,
    -2.571_804_158_241_872e-48,
];

/// Hurwitz ζ(s, a) = Σ_{n≥0} (n+a)^{−s} by Euler–Maclaurin with `n` direct
/// terms and up to `order` Bernoulli corrections.
pub fn zeta_euler_maclaurin(s: Complex, a: f64, n: usize, order: usize) -> Result<Complex> {
    check_finite(s, "zeta")?;
    if s == c(1.0, 0.0) {
        return Err(Error::Pole {
            function: "zeta",
            at: s,
        });
    }
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::domain(format!("Hurwitz zeta needs a > 0, got {a}")));
    }
    let order = order.min(BERNOULLI_OVER_FACTORIAL.len());
    let mut sum = c(0.0, 0.0);
    for k in 0..n {
        sum += (-s * (k as f64 + a).ln()).exp();
    }
    let big = n as f64 + a;
    let ln_big = big.ln();
    let pow = (-s * ln_big).exp();
    sum += big * pow / (s - 1.0) + 0.5 * pow;
    // term_k = B_{2k}/(2k)! · s(s+1)…(s+2k−2) · big^{−s−2k+1}
    let mut rising = s;
    let mut bpow = pow / big;
    for k in 1..=order {
        let term = BERNOULLI_OVER_FACTORIAL[k - 1] * rising * bpow;
        sum += term;
        let j = 2.0 * k as f64;
        // for Re s < 0 the rising product passes near zero; a small term
        // there says nothing about convergence
        if j > 1.0 - s.re && term.norm() <= 1e-18 * sum.norm() {
            break;
        }
        rising *= (s + (j - 1.0)) * (s + j);
        bpow /= big * big;
    }
    Ok(sum)
}

fn default_cutoff(s: Complex, a: f64) -> usize {
    let target = (s.norm() + 10.0).max(12.0);
    (target - a).ceil().max(1.0) as usize
}

/// Hurwitz ζ(s, a) for `a > 0`, `s ≠ 1`. Intended for `Re s > 0`; accuracy
/// degrades as `Re s` becomes very negative.
pub fn hurwitz_zeta(s: Complex, a: f64) -> Result<Complex> {
    zeta_euler_maclaurin(s, a, default_cutoff(s, a), 30)
}

/// Riemann ζ(s). Euler–Maclaurin for `Re s ≥ 0`, the functional equation
/// for `Re s < 0`. Pole error at `s = 1`.
pub fn riemann_zeta(s: Complex) -> Result<Complex> {
    check_finite(s, "zeta")?;
    if s.re >= 0.0 {
        return hurwitz_zeta(s, 1.0);
    }
    // ζ(s) = 2^s π^{s−1} sin(πs/2) Γ(1−s) ζ(1−s)
    let sn = sin_pi(s / 2.0);
    if sn == c(0.0, 0.0) {
        return Ok(c(0.0, 0.0));
    }
    let one_minus = 1.0 - s;
    let pre = (s * TAU.ln() - PI.ln()).exp();
    Ok(pre * sn * complex_gamma(one_minus)? * hurwitz_zeta(one_minus, 1.0)?)
}

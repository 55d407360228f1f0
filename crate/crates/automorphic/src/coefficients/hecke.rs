use serde::Serialize;

use super::{gcd, CoefficientSeries, Normalization, SpectralData, Values};
use crate::numerics::{c, Complex};

/// Largest Hecke-relation residuals found in a series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeckeReport {
    /// max |a_m a_n − a_{mn}| over coprime m, n ≥ 2 with mn ≤ N.
    pub multiplicative: f64,
    pub worst_pair: Option<(usize, usize)>,
    /// max |a_p a_{p^k} − a_{p^{k+1}} − p^w a_{p^{k−1}}| over p^{k+1} ≤ N.
    pub prime_power: f64,
    pub worst_prime_power: Option<(usize, u32)>,
    pub relations_tested: usize,
    /// True when the residuals were computed in exact integer arithmetic.
    pub exact: bool,
}

impl HeckeReport {
    pub fn max_residual(&self) -> f64 {
        self.multiplicative.max(self.prime_power)
    }
}

fn primes_up_to(n: usize) -> Vec<usize> {
    let mut sieve = vec![true; n + 1];
    let mut out = Vec::new();
    for p in 2..=n {
        if sieve[p] {
            out.push(p);
            for m in (p * p..=n).step_by(p) {
                sieve[m] = false;
            }
        }
    }
    out
}

// p^w in the prime-power relation; None when it is 1 (w = 0)
enum HeckeWeight {
    None,
    Integer(u32),
    Complex(Complex),
}

fn hecke_weight(series: &CoefficientSeries) -> HeckeWeight {
    match (&series.spectral, series.normalization) {
        (SpectralData::Holomorphic { weight }, Normalization::Arithmetic) => HeckeWeight::Integer(weight - 1),
        (SpectralData::Maass { lambda, .. }, Normalization::Arithmetic) if *lambda != c(0.0, 0.0) => {
            HeckeWeight::Complex(-*lambda)
        }
        _ => HeckeWeight::None,
    }
}

/// Residuals of the GL(2) Hecke relations. Integer series are checked
/// exactly on their stored values (so the Eisenstein constant c_k does not
/// enter); complex series are first divided by a_1 when it is not 1.
/// GL(4) series are checked for multiplicativity only.
pub fn check_hecke_relations(series: &CoefficientSeries) -> HeckeReport {
    let n_max = series.len();
    let weight = hecke_weight(series);
    let gl4 = matches!(series.spectral, SpectralData::Gl4 { .. });
    if let Values::Integer(v) = &series.values {
        let w = match weight {
            HeckeWeight::Integer(w) => Some(w),
            HeckeWeight::None => Some(0),
            HeckeWeight::Complex(_) => None,
        };
        if let Some(r) = w.and_then(|w| check_integer(v, w, gl4)) {
            return r;
        }
    }
    let mut a = series.to_complex();
    if series.integer(1).is_some() {
        // integer values are checked unscaled
        a = (1..=n_max).map(|n| c(series.integer(n).expect("in range") as f64, 0.0)).collect();
    }
    if let Some(&a1) = a.first() {
        if a1 != c(0.0, 0.0) && a1 != c(1.0, 0.0) {
            for x in a.iter_mut() {
                *x /= a1;
            }
        }
    }
    check_complex(&a, &weight, gl4)
}

fn check_integer(v: &[i128], w: u32, gl4: bool) -> Option<HeckeReport> {
    let n_max = v.len();
    let at = |n: usize| v[n - 1];
    let mut report = HeckeReport {
        multiplicative: 0.0,
        worst_pair: None,
        prime_power: 0.0,
        worst_prime_power: None,
        relations_tested: 0,
        exact: true,
    };
    for m in 2..=n_max / 2 {
        for n in (m + 1)..=(n_max / m) {
            if gcd(m as u128, n as u128) != 1 {
                continue;
            }
            let r = at(m).checked_mul(at(n))?.checked_sub(at(m * n))?;
            report.relations_tested += 1;
            let r = r.unsigned_abs() as f64;
            if r > report.multiplicative {
                report.multiplicative = r;
                report.worst_pair = Some((m, n));
            }
        }
    }
    if gl4 {
        return Some(report);
    }
    for p in primes_up_to(n_max.isqrt()) {
        let pw = (p as i128).checked_pow(w)?;
        let mut prev = 1usize;
        let mut cur = p;
        let mut k = 1u32;
        while cur.checked_mul(p).is_some_and(|next| next <= n_max) {
            let next = cur * p;
            let r = at(p)
                .checked_mul(at(cur))?
                .checked_sub(at(next))?
                .checked_sub(pw.checked_mul(at(prev))?)?;
            report.relations_tested += 1;
            let r = r.unsigned_abs() as f64;
            if r > report.prime_power {
                report.prime_power = r;
                report.worst_prime_power = Some((p, k));
            }
            prev = cur;
            cur = next;
            k += 1;
        }
    }
    Some(report)
}

fn check_complex(a: &[Complex], weight: &HeckeWeight, gl4: bool) -> HeckeReport {
    let n_max = a.len();
    let at = |n: usize| a[n - 1];
    let mut report = HeckeReport {
        multiplicative: 0.0,
        worst_pair: None,
        prime_power: 0.0,
        worst_prime_power: None,
        relations_tested: 0,
        exact: false,
    };
    for m in 2..=n_max / 2 {
        for n in (m + 1)..=(n_max / m) {
            if gcd(m as u128, n as u128) != 1 {
                continue;
            }
            let r = (at(m) * at(n) - at(m * n)).norm();
            report.relations_tested += 1;
            if r > report.multiplicative {
                report.multiplicative = r;
                report.worst_pair = Some((m, n));
            }
        }
    }
    if gl4 {
        return report;
    }
    for p in primes_up_to(n_max.isqrt()) {
        let pw = match weight {
            HeckeWeight::None => c(1.0, 0.0),
            HeckeWeight::Integer(w) => c((p as f64).powi(*w as i32), 0.0),
            HeckeWeight::Complex(w) => (*w * (p as f64).ln()).exp(),
        };
        let mut prev = 1usize;
        let mut cur = p;
        let mut k = 1u32;
        while cur.checked_mul(p).is_some_and(|next| next <= n_max) {
            let next = cur * p;
            let r = (at(p) * at(cur) - at(next) - pw * at(prev)).norm();
            report.relations_tested += 1;
            if r > report.prime_power {
                report.prime_power = r;
                report.worst_prime_power = Some((p, k));
            }
            prev = cur;
            cur = next;
            k += 1;
        }
    }
    report
}

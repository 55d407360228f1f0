//! Satake-parameter algebra for GL(4): Schur polynomials, local standard
//! and exterior-square Euler factors, the power-series identity linking
//! s_{(k,k,0,0)} to the exterior-square factor, and the global series.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::coefficients::{CoefficientSeries, Normalization, SpectralData, Values};
use crate::error::{Error, Result};
use crate::numerics::{c, riemann_zeta, Complex, EvalReport, TAU};

/// Four nonzero Satake parameters at one prime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SatakeParams {
    pub alpha: [Complex; 4],
    /// Set when Π α_j = 1 to rounding.
    pub unimodular: bool,
}

impl SatakeParams {
    pub fn new(alpha: [Complex; 4]) -> Result<Self> {
        if alpha.iter().any(|a| *a == c(0.0, 0.0) || !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::domain(format!("Satake parameters must be finite and nonzero, got {alpha:?}")));
        }
        let prod: Complex = alpha.iter().product();
        Ok(SatakeParams {
            alpha,
            unimodular: (prod - 1.0).norm() <= 1e-12,
        })
    }

    pub fn real(alpha: [f64; 4]) -> Result<Self> {
        SatakeParams::new(alpha.map(|a| c(a, 0.0)))
    }

    /// The six exterior-square parameters α_j α_k, j < k.
    pub fn pair_products(&self) -> [Complex; 6] {
        let a = &self.alpha;
        [a[0] * a[1], a[0] * a[2], a[0] * a[3], a[1] * a[2], a[1] * a[3], a[2] * a[3]]
    }

    /// Radius 0.9/max|α_jα_k| (at most 0.9), inside the disc where the
    /// exterior-square factor is analytic.
    pub fn default_radius(&self) -> f64 {
        let m = self.pair_products().iter().map(|p| p.norm()).fold(1.0, f64::max);
        0.9 / m
    }
}

/// A partition with at most four parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Partition4 {
    pub parts: [u32; 4],
}

impl Partition4 {
    pub fn new(parts: [u32; 4]) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::domain(format!("partition parts must be weakly decreasing, got {parts:?}")));
        }
        Ok(Partition4 { parts })
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }
}

/// h_0, …, h_K of the complete homogeneous symmetric polynomials, i.e.
/// the power-series coefficients of Π_j (1 − α_j x)^{−1}.
pub fn complete_homogeneous(alpha: &[Complex], k_max: usize) -> Vec<Complex> {
    let mut h = vec![c(0.0, 0.0); k_max + 1];
    h[0] = c(1.0, 0.0);
    for &a in alpha {
        // multiply by the geometric series 1/(1 − a x)
        for k in 1..=k_max {
            let prev = h[k - 1];
            h[k] += a * prev;
        }
    }
    h
}

// permutation expansion of the leading n×n block; division-free
fn det4(m: &[[Complex; 4]; 4], n: usize) -> Complex {
    fn rec(m: &[[Complex; 4]; 4], n: usize, row: usize, used: &mut [bool; 4], sign: f64) -> Complex {
        if row == n {
            return c(sign, 0.0);
        }
        let mut total = c(0.0, 0.0);
        let mut free_left = 0;
        for col in 0..n {
            if used[col] {
                continue;
            }
            if m[row][col] != c(0.0, 0.0) {
                let s = if free_left % 2 == 0 { sign } else { -sign };
                used[col] = true;
                total += m[row][col] * rec(m, n, row + 1, used, s);
                used[col] = false;
            }
            free_left += 1;
        }
        total
    }
    rec(m, n, 0, &mut [false; 4], 1.0)
}

/// s_λ(α) by the Jacobi–Trudi determinant det(h_{λ_i − i + j}).
pub fn schur_poly(lam: Partition4, alpha: &[Complex; 4]) -> Complex {
    let n = lam.parts.iter().filter(|&&p| p > 0).count();
    if n == 0 {
        return c(1.0, 0.0);
    }
    let h = complete_homogeneous(alpha, lam.parts[0] as usize + n);
    let mut m = [[c(0.0, 0.0); 4]; 4];
    for (i, row) in m.iter_mut().enumerate().take(n) {
        for (j, cell) in row.iter_mut().enumerate().take(n) {
            let idx = lam.parts[i] as i64 - i as i64 + j as i64;
            if idx >= 0 {
                *cell = h[idx as usize];
            }
        }
    }
    det4(&m, n)
}

fn check_factor(one_minus: Complex, what: &'static str, at: Complex) -> Result<Complex> {
    if one_minus.norm() <= 1e-14 {
        return Err(Error::Pole { function: what, at });
    }
    Ok(1.0 / one_minus)
}

/// Π_j (1 − α_j x)^{−1}.
pub fn local_standard_factor(alpha: &SatakeParams, x: Complex) -> Result<Complex> {
    alpha
        .alpha
        .iter()
        .try_fold(c(1.0, 0.0), |acc, a| Ok(acc * check_factor(1.0 - a * x, "local standard factor", x)?))
}

/// Π_{j<k} (1 − α_j α_k x)^{−1}.
pub fn local_extsq_factor(alpha: &SatakeParams, x: Complex) -> Result<Complex> {
    alpha
        .pair_products()
        .iter()
        .try_fold(c(1.0, 0.0), |acc, a| Ok(acc * check_factor(1.0 - a * x, "local exterior-square factor", x)?))
}

/// Power-series coefficients of the exterior-square factor to order K.
pub fn extsq_factor_series(alpha: &SatakeParams, k_max: usize) -> Vec<Complex> {
    complete_homogeneous(&alpha.pair_products(), k_max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesResidual {
    pub max_residual: f64,
    pub worst_order: usize,
    pub radius: f64,
    pub order: usize,
}

fn max_scaled_diff(lhs: &[Complex], rhs: &[Complex], radius: f64) -> (f64, usize) {
    let mut worst = (0.0, 0);
    let mut r = 1.0;
    for (k, (a, b)) in lhs.iter().zip(rhs).enumerate() {
        let d = (a - b).norm() * r;
        if d > worst.0 {
            worst = (d, k);
        }
        r *= radius;
    }
    worst
}

/// Coefficientwise check of Σ_k s_{(k,k,0,0)}(α) x^k = (1 − x²) Π_{j<k}
/// (1 − α_jα_k x)^{−1} to order K, on the circle |x| = `radius`: the
/// residual is max_k r^k |lhs_k − rhs_k|.
pub fn js_verify(alpha: &SatakeParams, radius: f64, k_max: usize) -> Result<SeriesResidual> {
    if !alpha.unimodular {
        return Err(Error::domain("identity needs unimodular Satake parameters"));
    }
    if k_max < 2 {
        return Err(Error::domain("order K must be at least 2"));
    }
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::domain(format!("radius must lie in (0, 1), got {radius}")));
    }
    let lhs: Vec<Complex> = (0..=k_max as u32)
        .map(|k| schur_poly(Partition4 { parts: [k, k, 0, 0] }, &alpha.alpha))
        .collect();
    let ext = extsq_factor_series(alpha, k_max);
    let rhs: Vec<Complex> = (0..=k_max)
        .map(|k| if k >= 2 { ext[k] - ext[k - 2] } else { ext[k] })
        .collect();
    let (max_residual, worst_order) = max_scaled_diff(&lhs, &rhs, radius);
    Ok(SeriesResidual {
        max_residual,
        worst_order,
        radius,
        order: k_max,
    })
}

/// Littlewood's expansion Π_{j<k}(1 − α_jα_k x)^{−1} = Σ s_{(a,a,b,b)}(α)
/// x^{a+b}, checked to order 2K (all a ≤ K) on |x| = `radius`. Needs no
/// unimodularity.
pub fn littlewood_verify(alpha: &SatakeParams, radius: f64, k_max: usize) -> Result<SeriesResidual> {
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::domain(format!("radius must lie in (0, 1), got {radius}")));
    }
    let order = 2 * k_max;
    let rhs = extsq_factor_series(alpha, order);
    let mut lhs = vec![c(0.0, 0.0); order + 1];
    for a in 0..=k_max as u32 {
        for b in 0..=a {
            lhs[(a + b) as usize] += schur_poly(Partition4 { parts: [a, a, b, b] }, &alpha.alpha);
        }
    }
    // orders above K miss the terms with a > K; compare only complete ones
    let (max_residual, worst_order) = max_scaled_diff(&lhs[..=k_max], &rhs[..=k_max], radius);
    Ok(SeriesResidual {
        max_residual,
        worst_order,
        radius,
        order: k_max,
    })
}

/// ε₁^{η₁} ε₂^{η₁+η₂} ε₃^{η₁+η₂+η₃}.
pub fn gl4_duality_signs(eta: [u8; 4], eps: [i8; 3]) -> i8 {
    let mut exponent = 0u32;
    let mut sign = 1i8;
    for j in 0..3 {
        exponent += eta[j] as u32;
        if eps[j] < 0 && exponent % 2 == 1 {
            sign = -sign;
        }
    }
    sign
}

/// Random Satake parameters with |α_j| in `[lo, hi]` and Π α_j = 1: three
/// log-magnitudes and four phases are drawn, the fourth modulus is fixed
/// by the product, and draws putting it outside the range are rejected.
pub fn random_unimodular<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> SatakeParams {
    let (l0, l1) = (lo.ln(), hi.ln());
    loop {
        let mut alpha = [c(0.0, 0.0); 4];
        let mut log_sum = 0.0;
        for a in alpha.iter_mut().take(3) {
            let m = rng.random_range(l0..=l1);
            let t: f64 = rng.random_range(0.0..1.0);
            log_sum += m;
            *a = Complex::from_polar(m.exp(), TAU * t);
        }
        if -log_sum < l0 || -log_sum > l1 {
            continue;
        }
        alpha[3] = 1.0 / (alpha[0] * alpha[1] * alpha[2]);
        if let Ok(p) = SatakeParams::new(alpha) {
            if p.unimodular {
                return p;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialBatch {
    pub seed: u64,
    pub trials: usize,
    pub order: usize,
    pub js_max: f64,
    pub js_worst_trial: usize,
    pub littlewood_max: f64,
    pub littlewood_worst_trial: usize,
}

/// Seeded batch of [`js_verify`] and [`littlewood_verify`] runs at the
/// default radius of each draw, |α_j| ∈ [1/3, 3].
pub fn run_trials(seed: u64, trials: usize, k_max: usize) -> Result<TrialBatch> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<SatakeParams> = (0..trials).map(|_| random_unimodular(&mut rng, 1.0 / 3.0, 3.0)).collect();
    let results: Vec<(SeriesResidual, SeriesResidual)> = draws
        .par_iter()
        .map(|a| {
            let r = a.default_radius();
            Ok((js_verify(a, r, k_max)?, littlewood_verify(a, r, k_max)?))
        })
        .collect::<Result<_>>()?;
    let mut batch = TrialBatch {
        seed,
        trials,
        order: k_max,
        js_max: 0.0,
        js_worst_trial: 0,
        littlewood_max: 0.0,
        littlewood_worst_trial: 0,
    };
    for (i, (js, lw)) in results.iter().enumerate() {
        if js.max_residual > batch.js_max {
            batch.js_max = js.max_residual;
            batch.js_worst_trial = i;
        }
        if lw.max_residual > batch.littlewood_max {
            batch.littlewood_max = lw.max_residual;
            batch.littlewood_worst_trial = i;
        }
    }
    Ok(batch)
}

/// Trial parameters read from a fixture file of `key value` lines
/// (`seed`, `trials`, `kmax`, `tolerance`, `littlewood_tolerance`);
/// `#` starts a comment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialFixture {
    pub seed: u64,
    pub trials: usize,
    pub kmax: usize,
    pub tolerance: f64,
    pub littlewood_tolerance: f64,
}

pub fn parse_trial_fixture(text: &str) -> Result<TrialFixture> {
    let mut fx = TrialFixture {
        seed: 42,
        trials: 100,
        kmax: 12,
        tolerance: 1e-10,
        littlewood_tolerance: 1e-9,
    };
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |m: String| Error::Parse { line: i + 1, message: m };
        let (key, value) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| err(format!("expected `key value`, got {line:?}")))?;
        let value = value.trim();
        let bad = || err(format!("bad value {value:?} for {key}"));
        match key {
            "seed" => fx.seed = value.parse().map_err(|_| bad())?,
            "trials" => fx.trials = value.parse().map_err(|_| bad())?,
            "kmax" => fx.kmax = value.parse().map_err(|_| bad())?,
            "tolerance" => fx.tolerance = value.parse().map_err(|_| bad())?,
            "littlewood_tolerance" => fx.littlewood_tolerance = value.parse().map_err(|_| bad())?,
            _ => return Err(err(format!("unknown key {key:?}"))),
        }
    }
    Ok(fx)
}

/// GL(4) coefficients a_{1,n,1} for n ≤ N, the multiplicative extension of
/// a_{1,p^k,1} = s_{(k,k,0,0)}(α_p) over the listed primes; n with any
/// other prime factor gets 0.
pub fn extsq_coefficients(local: &[(u64, SatakeParams)], mu: [Complex; 4], eta: [u8; 4], count: usize) -> Result<CoefficientSeries> {
    let spectral = SpectralData::gl4(mu, eta)?;
    let mut a = vec![c(0.0, 0.0); count + 1];
    if count >= 1 {
        a[1] = c(1.0, 0.0);
    }
    // build up multiplicatively one prime at a time
    for &(p, alpha) in local {
        let p = p as usize;
        if p < 2 {
            return Err(Error::domain(format!("{p} is not a prime")));
        }
        let mut powers = Vec::new();
        let mut pk = p;
        let mut k = 1u32;
        while pk <= count {
            powers.push((pk, schur_poly(Partition4 { parts: [k, k, 0, 0] }, &alpha.alpha)));
            pk = match pk.checked_mul(p) {
                Some(v) => v,
                None => break,
            };
            k += 1;
        }
        // each n coprime to p with a nonzero value spawns n·p^k
        let base: Vec<usize> = (1..=count).filter(|&n| n % p != 0 && a[n] != c(0.0, 0.0)).collect();
        for n in base {
            for &(pk, v) in &powers {
                match n.checked_mul(pk) {
                    Some(m) if m <= count => a[m] = a[n] * v,
                    _ => break,
                }
            }
        }
    }
    let mut s = CoefficientSeries::new(spectral, Values::Complex(a[1..].to_vec()), Normalization::Unitary);
    s.hecke_normalized = true;
    Ok(s)
}

/// ζ(2s) Σ_{n≤N} a_{1,n,1} n^{μ₁+μ₂−s}. The tail estimate assumes
/// |a_n| grows no faster than over the last half of the data and is
/// flagged as heuristic; `Re(s − μ₁ − μ₂) ≤ 1` is flagged as outside the
/// region of absolute convergence.
pub fn extsq_series(series: &CoefficientSeries, s: Complex, count: usize) -> Result<EvalReport> {
    let SpectralData::Gl4 { mu, .. } = series.spectral else {
        return Err(Error::domain("exterior-square series needs GL(4) data"));
    };
    let n_max = count.min(series.len());
    let shift = mu[0] + mu[1] - s;
    let mut sum = c(0.0, 0.0);
    let mut tail_scale: f64 = 0.0;
    for n in 1..=n_max {
        let a = series.get(n).expect("in range");
        if a == c(0.0, 0.0) {
            continue;
        }
        sum += a * (shift * (n as f64).ln()).exp();
        if 2 * n > n_max {
            tail_scale = tail_scale.max(a.norm());
        }
    }
    let mut flags = vec!["heuristic tail bound".to_string()];
    let sigma = -shift.re;
    let tail = if sigma > 1.0 {
        tail_scale * (n_max as f64).powf(1.0 - sigma) / (sigma - 1.0)
    } else {
        flags.push(format!("Re(s − μ₁ − μ₂) = {sigma} outside the absolute convergence region"));
        f64::INFINITY
    };
    let z = riemann_zeta(2.0 * s)?;
    Ok(EvalReport {
        value: z * sum,
        error_estimate: z.norm() * tail,
        terms: n_max,
        quadrature: None,
        flags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    fn ones() -> SatakeParams {
        SatakeParams::real([1.0; 4]).unwrap()
    }

    // semistandard tableaux of shape λ with entries in 1..=4
    fn tableau_count(lam: [u32; 4]) -> u64 {
        let cells: Vec<(usize, usize)> = (0..4)
            .flat_map(|r| (0..lam[r] as usize).map(move |col| (r, col)))
            .collect();
        let mut grid = [[0u8; 16]; 4];
        fn fill(i: usize, cells: &[(usize, usize)], grid: &mut [[u8; 16]; 4]) -> u64 {
            if i == cells.len() {
                return 1;
            }
            let (r, col) = cells[i];
            let mut lo = 1;
            if col > 0 {
                lo = lo.max(grid[r][col - 1]);
            }
            if r > 0 {
                lo = lo.max(grid[r - 1][col] + 1);
            }
            let mut total = 0;
            for v in lo..=4 {
                grid[r][col] = v;
                total += fill(i + 1, cells, grid);
            }
            grid[r][col] = 0;
            total
        }
        fill(0, &cells, &mut grid)
    }

    fn weyl_dimension(lam: [u32; 4]) -> f64 {
        let mut num = 1.0;
        let mut den = 1.0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                num *= (lam[i] as f64 - lam[j] as f64) + (j - i) as f64;
                den *= (j - i) as f64;
            }
        }
        num / den
    }

    #[test]
    fn schur_small_cases() {
        let a = [c(0.5, 0.1), c(-1.2, 0.0), c(2.0, 0.3), c(0.7, -0.4)];
        let e1: Complex = a.iter().sum();
        let s = schur_poly(Partition4::new([1, 0, 0, 0]).unwrap(), &a);
        assert!((s - e1).norm() < 1e-14);
        let mut e2 = c(0.0, 0.0);
        for i in 0..4 {
            for j in (i + 1)..4 {
                e2 += a[i] * a[j];
            }
        }
        assert!((schur_poly(Partition4::new([1, 1, 0, 0]).unwrap(), &a) - e2).norm() < 1e-14);
        assert_eq!(schur_poly(Partition4::new([2, 2, 0, 0]).unwrap(), &ones().alpha), c(20.0, 0.0));
        assert_eq!(tableau_count([2, 2, 0, 0]), 20);
        assert!(Partition4::new([1, 2, 0, 0]).is_err());
    }

    #[test]
    fn schur_at_ones_is_a_tableau_count() {
        let mut checked = 0;
        for a in 0..=8u32 {
            for b in 0..=a {
                for cc in 0..=b {
                    for d in 0..=cc {
                        if a + b + cc + d > 8 {
                            continue;
                        }
                        let lam = [a, b, cc, d];
                        let s = schur_poly(Partition4 { parts: lam }, &ones().alpha);
                        let count = tableau_count(lam) as f64;
                        assert_eq!(s, c(count, 0.0), "{lam:?}");
                        assert_eq!(weyl_dimension(lam), count);
                        checked += 1;
                    }
                }
            }
        }
        // partitions of size ≤ 8 into at most four parts
        assert_eq!(checked, 53);
    }

    #[test]
    fn local_factors() {
        let half = c(0.5, 0.0);
        assert!((local_standard_factor(&ones(), half).unwrap() - 16.0).norm() < 1e-12);
        assert!((local_extsq_factor(&ones(), half).unwrap() - 64.0).norm() < 1e-12);
        let g = SatakeParams::real([2.0, 0.5, 3.0, 1.0 / 6.0]).unwrap();
        assert_eq!(local_standard_factor(&g, c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert_eq!(local_extsq_factor(&g, c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert!(matches!(local_standard_factor(&g, half), Err(Error::Pole { .. })));
    }

    #[test]
    fn standard_factor_matches_its_series() {
        let g = SatakeParams::new([c(0.3, 0.2), c(-0.5, 0.1), c(0.8, -0.6), c(0.2, 0.9)]).unwrap();
        let x = c(0.21, -0.13);
        let h = complete_homogeneous(&g.alpha, 60);
        // independent: convolve the four geometric series directly
        let mut conv = vec![c(1.0, 0.0)];
        for a in g.alpha {
            let geo: Vec<Complex> = (0..=60).map(|k| a.powu(k)).collect();
            let mut next = vec![c(0.0, 0.0); 61];
            for (i, p) in conv.iter().enumerate() {
                for (j, q) in geo.iter().enumerate().take(61 - i) {
                    next[i + j] += p * q;
                }
            }
            conv = next;
        }
        for k in 0..=20 {
            assert!((h[k] - conv[k]).norm() < 1e-12);
        }
        let series: Complex = h.iter().enumerate().map(|(k, v)| v * x.powu(k as u32)).sum();
        assert!((series - local_standard_factor(&g, x).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn pair_products_are_the_pairs() {
        let g = SatakeParams::real([2.0, 3.0, 5.0, 1.0 / 30.0]).unwrap();
        let mut got: Vec<f64> = g.pair_products().iter().map(|p| p.re).collect();
        let mut want = vec![6.0, 10.0, 15.0, 2.0 / 30.0, 3.0 / 30.0, 5.0 / 30.0];
        got.sort_by(f64::total_cmp);
        want.sort_by(f64::total_cmp);
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn js_identity_examples() {
        let r = js_verify(&ones(), 0.5, 4).unwrap();
        assert!(r.max_residual <= 1e-12);
        let g = SatakeParams::real([2.0, 0.5, 3.0, 1.0 / 3.0]).unwrap();
        assert!(g.unimodular);
        assert!(!SatakeParams::real([2.0, 0.5, 3.0, 1.0 / 6.0]).unwrap().unimodular);
        let r = js_verify(&g, g.default_radius(), 10).unwrap();
        assert!(r.max_residual <= 1e-9, "{r:?}");
        let bad = SatakeParams::real([1.0, 1.0, 1.0, 2.0]).unwrap();
        assert!(matches!(js_verify(&bad, 0.5, 4), Err(Error::Domain(_))));
    }

    #[test]
    fn seeded_batches() {
        let b = run_trials(42, 100, 12).unwrap();
        assert!(b.js_max <= 1e-10, "{b:?}");
        assert!(b.littlewood_max <= 1e-9, "{b:?}");
        assert_eq!(b, run_trials(42, 100, 12).unwrap());
    }

    #[test]
    fn duality_signs() {
        assert_eq!(gl4_duality_signs([1, 0, 0, 1], [1, 1, 1]), 1);
        assert_eq!(gl4_duality_signs([1, 1, 0, 0], [-1, 1, 1]), -1);
        assert_eq!(gl4_duality_signs([1, 0, 0, 1], [-1, 1, 1]), -1);
        assert_eq!(gl4_duality_signs([1, 1, 0, 0], [1, -1, 1]), 1);
        assert_eq!(gl4_duality_signs([1, 0, 1, 0], [1, 1, -1]), 1);
    }

    #[test]
    fn fixture_parsing() {
        let fx = parse_trial_fixture("# batch\nseed 7\ntrials 10\nkmax 8\ntolerance 1e-11\n").unwrap();
        assert_eq!((fx.seed, fx.trials, fx.kmax), (7, 10, 8));
        assert_eq!(fx.tolerance, 1e-11);
        assert!(parse_trial_fixture("seeds 7\n").is_err());
        assert!(parse_trial_fixture("seed x\n").is_err());
    }

    #[test]
    fn euler_product_matches_series() {
        let z = c(0.0, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let primes = [2u64, 3, 5, 7];
        // tempered parameters so the series converges for Re s > 1
        let local: Vec<(u64, SatakeParams)> = primes
            .iter()
            .map(|&p| {
                let t: [f64; 3] = [rng.random(), rng.random(), rng.random()];
                let alpha = [
                    Complex::from_polar(1.0, TAU * t[0]),
                    Complex::from_polar(1.0, TAU * t[1]),
                    Complex::from_polar(1.0, TAU * t[2]),
                    Complex::from_polar(1.0, -TAU * (t[0] + t[1] + t[2])),
                ];
                (p, SatakeParams::new(alpha).unwrap())
            })
            .collect();
        let count = 200_000;
        let series = extsq_coefficients(&local, [z; 4], [0; 4], count).unwrap();
        let s = c(2.5, 0.7);
        let r = extsq_series(&series, s, count).unwrap();
        let mut product = riemann_zeta(2.0 * s).unwrap();
        for (p, a) in &local {
            let x = (-s * (*p as f64).ln()).exp();
            product *= (1.0 - x * x) * local_extsq_factor(a, x).unwrap();
        }
        assert!((r.value - product).norm() <= r.error_estimate.max(1e-12), "{} vs {product}, bound {}", r.value, r.error_estimate);
    }

    #[test]
    fn single_trivial_prime() {
        let z = c(0.0, 0.0);
        let series = extsq_coefficients(&[(2, ones())], [z; 4], [0; 4], 1 << 16).unwrap();
        let s = c(3.0, 0.0);
        let r = extsq_series(&series, s, 1 << 16).unwrap();
        let x = 0.125f64;
        let want = riemann_zeta(2.0 * s).unwrap() * (1.0 - x * x) / (1.0 - x).powi(6);
        assert!((r.value - want).norm() < 1e-10 * want.norm());
        let zero = CoefficientSeries::zeros(SpectralData::gl4([z; 4], [0; 4]).unwrap(), 10);
        assert_eq!(extsq_series(&zero, s, 10).unwrap().value, c(0.0, 0.0));
    }

    proptest! {
        #[test]
        fn random_draws_are_unimodular_and_in_range(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_unimodular(&mut rng, 1.0 / 3.0, 3.0);
            prop_assert!(a.unimodular);
            for x in a.alpha {
                prop_assert!(x.norm() >= 1.0 / 3.0 - 1e-12 && x.norm() <= 3.0 + 1e-12);
            }
        }

        #[test]
        fn schur_symmetric(p in prop::array::uniform4(0u32..4), re in prop::array::uniform4(-1.5f64..1.5)) {
            let mut parts = p;
            parts.sort_unstable_by(|a, b| b.cmp(a));
            let lam = Partition4 { parts };
            let a = re.map(|x| c(x, 0.3 * x));
            let b = [a[2], a[0], a[3], a[1]];
            let (x, y) = (schur_poly(lam, &a), schur_poly(lam, &b));
            // s_λ(|α|) bounds the sum of the monomials' moduli
            let scale = schur_poly(lam, &a.map(|z| c(z.norm(), 0.0))).re;
            prop_assert!((x - y).norm() <= 1e-10 * (1.0 + scale));
        }
    }
}

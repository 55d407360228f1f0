//! The completed real-analytic Eisenstein series
//!
//! E*(s, z) = π^{−s} Γ(s) ζ(2s) · ½ Σ_{gcd(c,d)=1} y^s / |cz + d|^{2s}
//!
//! evaluated by its Fourier–Bessel expansion everywhere in s, checked
//! against lattice sums, and the Rankin–Selberg integral over the standard
//! fundamental domain.

use rayon::prelude::*;
use serde::Serialize;

use crate::coefficients::{CoefficientSeries, ConstantTerm, Rational, SpectralData};
use crate::error::{Error, Result};
use crate::numerics::{
    bessel_k, c, complex_gamma, gauss_legendre, hurwitz_zeta, riemann_zeta, Complex, EvalReport, QuadratureResult, PI,
    TAU,
};

/// Factor applied to the Fourier–Bessel expansion so that it matches the
/// coset sum; pinned by [`calibrate_normalization`].
pub const NORMALIZATION: Rational = Rational::ONE;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UpperHalfPoint {
    pub x: f64,
    pub y: f64,
}

impl UpperHalfPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::domain(format!("point must lie in the upper half plane, got {x}+{y}i")));
        }
        Ok(UpperHalfPoint { x, y })
    }

    pub fn to_complex(self) -> Complex {
        c(self.x, self.y)
    }

    /// (az + b)/(cz + d) for an integer matrix of determinant 1.
    pub fn apply(self, m: [[i64; 2]; 2]) -> UpperHalfPoint {
        let z = self.to_complex();
        let w = (z * m[0][0] as f64 + m[0][1] as f64) / (z * m[1][0] as f64 + m[1][1] as f64);
        UpperHalfPoint { x: w.re, y: w.im }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReductionResult {
    pub reduced: UpperHalfPoint,
    /// Maps the input point to `reduced`.
    pub matrix: [[i64; 2]; 2],
}

fn mat_mul(a: [[i64; 2]; 2], b: [[i64; 2]; 2]) -> Option<[[i64; 2]; 2]> {
    let entry = |i: usize, j: usize| a[i][0].checked_mul(b[0][j])?.checked_add(a[i][1].checked_mul(b[1][j])?);
    Some([[entry(0, 0)?, entry(0, 1)?], [entry(1, 0)?, entry(1, 1)?]])
}

/// Moves `z` into |x| ≤ ½, |z| ≥ 1 by translations and z ↦ −1/z.
///
/// The matrix is accumulated in exact integers and the reduced point is
/// recomputed from it, so rounding does not build up over the steps.
pub fn reduce_to_fundamental_domain(z: UpperHalfPoint) -> ReductionResult {
    let mut m = [[1i64, 0], [0, 1]];
    let mut w = z;
    for _ in 0..10_000 {
        let n = w.x.round();
        if n != 0.0 && n.abs() < 9.0e15 {
            let t = [[1, -(n as i64)], [0, 1]];
            match mat_mul(t, m) {
                Some(next) => m = next,
                None => break,
            }
            w = z.apply(m);
        }
        if w.x * w.x + w.y * w.y < 1.0 - 1e-15 {
            match mat_mul([[0, -1], [1, 0]], m) {
                Some(next) => m = next,
                None => break,
            }
            w = z.apply(m);
        } else if w.x.abs() <= 0.5 {
            break;
        }
    }
    ReductionResult { reduced: w, matrix: m }
}

fn ln_abs_pow(s: Complex, ln_base: f64) -> Complex {
    (s * ln_base).exp()
}

/// The literal coset sum over coprime (c, d) with |c|, |d| ≤ R, times
/// π^{−s}Γ(s)ζ(2s). The error estimate bounds the omitted pairs through the
/// smallest eigenvalue of the form |cz + d|².
pub fn eval_direct_sum(s: Complex, z: UpperHalfPoint, r: u32) -> Result<EvalReport> {
    if s.re <= 1.0 {
        return Err(Error::domain(format!("coset sum needs Re s > 1, got {s}")));
    }
    if r == 0 {
        return Err(Error::domain("truncation R must be positive"));
    }
    let (x, y) = (z.x, z.y);
    let r = r as i64;
    let rows: Vec<Complex> = (1..=r)
        .into_par_iter()
        .map(|cc| {
            let mut row = c(0.0, 0.0);
            for d in -r..=r {
                if gcd(cc.unsigned_abs(), d.unsigned_abs()) != 1 {
                    continue;
                }
                let re = cc as f64 * x + d as f64;
                let im = cc as f64 * y;
                row += ln_abs_pow(-s, (re * re + im * im).ln());
            }
            row
        })
        .collect();
    // (0, ±1) counted once after halving
    let lattice = rows.iter().fold(c(1.0, 0.0), |acc, v| acc + v);
    let prefactor = completed_zeta_prefactor(s)? * ln_abs_pow(s, y.ln());
    let norm2 = x * x + y * y;
    let lambda = 0.5 * (norm2 + 1.0 - ((norm2 - 1.0).powi(2) + 4.0 * x * x).sqrt());
    let sigma = s.re;
    let tail = prefactor.norm() * lambda.powf(-sigma) * PI * (r as f64).powf(2.0 - 2.0 * sigma) / (2.0 * sigma - 2.0);
    let mut flags = Vec::new();
    if sigma <= 1.5 {
        flags.push("slow convergence: Re s ≤ 1.5".to_string());
    }
    Ok(EvalReport {
        value: prefactor * lattice,
        error_estimate: tail,
        terms: (2 * r as usize + 1) * r as usize,
        quadrature: None,
        flags,
    })
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

// π^{−s} Γ(s) ζ(2s)
fn completed_zeta_prefactor(s: Complex) -> Result<Complex> {
    Ok((-s * PI.ln()).exp() * complex_gamma(s)? * riemann_zeta(2.0 * s)?)
}

/// Row-summed lattice form, used as the accurate route to the coset sum:
///
/// E* = π^{−s}Γ(s) y^s [ζ(2s) + Σ_{m≥1} Σ_{n∈ℤ} |mz + n|^{−2s}].
///
/// Rows m ≤ M are summed directly over |n| ≤ N_m with binomial–Hurwitz
/// tails; rows m > M are replaced by their integral
/// √π Γ(s−½)/Γ(s) (my)^{1−2s}, which is off by O(e^{−2πMy}). Evaluates at
/// the reduced point.
pub fn eval_direct_lattice(s: Complex, z: UpperHalfPoint) -> Result<EvalReport> {
    if s.re <= 1.0 {
        return Err(Error::domain(format!("lattice sum needs Re s > 1, got {s}")));
    }
    let z = reduce_to_fundamental_domain(z).reduced;
    let (x, y) = (z.x, z.y);
    let rows = ((45.0 / (TAU * y)).ceil() as usize).max(4);
    let mut total = riemann_zeta(2.0 * s)?;
    let mut terms = 0;
    for m in 1..=rows {
        let (sum, used) = row_sum(s, m as f64 * x, m as f64 * y)?;
        total += sum;
        terms += used;
    }
    let far = PI.sqrt() * complex_gamma(s - 0.5)? / complex_gamma(s)?
        * ln_abs_pow(1.0 - 2.0 * s, y.ln())
        * hurwitz_zeta(2.0 * s - 1.0, rows as f64 + 1.0)?;
    total += far;
    let pre = (-s * PI.ln()).exp() * complex_gamma(s)? * ln_abs_pow(s, y.ln());
    let value = pre * total;
    let omitted = (-TAU * (rows as f64 + 1.0) * y).exp() * pre.norm() * 8.0;
    Ok(EvalReport {
        value,
        error_estimate: omitted + 1e-15 * value.norm(),
        terms,
        quadrature: None,
        flags: Vec::new(),
    })
}

// Σ_n ((n + u)² + v²)^{−s}
fn row_sum(s: Complex, u: f64, v: f64) -> Result<(Complex, usize)> {
    let n_max = (2.0 * v + u.abs()).ceil() as i64 + 8;
    let q = v * v;
    let mut sum = c(0.0, 0.0);
    for n in -n_max..=n_max {
        let t = n as f64 + u;
        sum += ln_abs_pow(-s, (t * t + q).ln());
    }
    // ((n+u)² + q)^{−s} = Σ_j C(−s, j) q^j (n+u)^{−2s−2j}
    for a in [n_max as f64 + 1.0 + u, n_max as f64 + 1.0 - u] {
        let mut binom = c(1.0, 0.0);
        let mut qj = 1.0;
        for j in 0..80 {
            let term = binom * qj * hurwitz_zeta(2.0 * s + 2.0 * j as f64, a)?;
            sum += term;
            if term.norm() <= 1e-18 * sum.norm() {
                break;
            }
            binom *= (-s - j as f64) / (j as f64 + 1.0);
            qj *= q;
        }
    }
    Ok((sum, (2 * n_max + 1) as usize))
}

// ξ(w) = π^{−w/2} Γ(w/2) ζ(w), through ξ(w) = ξ(1−w) when Re w < ½.
fn xi(w: Complex) -> Result<Complex> {
    let w = if w.re < 0.5 { 1.0 - w } else { w };
    if w == c(1.0, 0.0) {
        return Err(Error::Pole { function: "xi", at: w });
    }
    Ok((-w / 2.0 * PI.ln()).exp() * complex_gamma(w / 2.0)? * riemann_zeta(w)?)
}

const CENTER_RADIUS: f64 = 0.05;
const CENTER_NODES: usize = 32;

/// E*(s, z) from the Fourier–Bessel expansion
///
/// ξ(2s) y^s + ξ(2s−1) y^{1−s} + 4√y Σ n^{s−½} σ_{1−2s}(n) K_{s−½}(2πny) cos(2πnx),
///
/// evaluated at the reduced point. The two constant terms have cancelling
/// poles at s = ½; within a quarter of [`CENTER_RADIUS`] of ½ the value
/// comes from Cauchy's formula on the circle of that radius.
pub fn eval_completed_eisenstein(s: Complex, z: UpperHalfPoint, tol: f64) -> Result<EvalReport> {
    if s == c(1.0, 0.0) || s == c(0.0, 0.0) {
        return Err(Error::Pole {
            function: "eisenstein",
            at: s,
        });
    }
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    let z = reduce_to_fundamental_domain(z).reduced;
    let offset = s - 0.5;
    if offset.norm() >= CENTER_RADIUS / 4.0 {
        return expansion(s, z, tol);
    }
    let mut value = c(0.0, 0.0);
    let mut err = 0.0;
    let mut terms = 0;
    for j in 0..CENTER_NODES {
        let dir = Complex::from_polar(1.0, TAU * j as f64 / CENTER_NODES as f64);
        let w = 0.5 + CENTER_RADIUS * dir;
        let r = expansion(w, z, tol * 1e-2)?;
        value += r.value * (CENTER_RADIUS * dir) / (w - s);
        err += r.error_estimate;
        terms += r.terms;
    }
    let n = CENTER_NODES as f64;
    Ok(EvalReport {
        value: value / n,
        error_estimate: 2.0 * err / n + 1e-14 * value.norm() / n,
        terms,
        quadrature: None,
        flags: vec!["near s = 1/2: Cauchy interpolation".to_string()],
    })
}

fn expansion(s: Complex, z: UpperHalfPoint, tol: f64) -> Result<EvalReport> {
    let (x, y) = (z.x, z.y);
    let nu = s - 0.5;
    let constant = xi(2.0 * s)? * ln_abs_pow(s, y.ln()) + xi(2.0 * s - 1.0)? * ln_abs_pow(1.0 - s, y.ln());
    let mut sum = c(0.0, 0.0);
    let mut small = 0;
    let mut n = 0usize;
    let mut last = 0.0;
    let monotone_from = nu.norm().max(1.0) + 5.0;
    while small < 2 {
        n += 1;
        if n > 100_000 {
            return Err(Error::NonConvergence {
                what: "eisenstein expansion",
                estimate: constant + sum,
            });
        }
        let arg = TAU * n as f64 * y;
        let k = bessel_k(nu, arg)?;
        let term = if k.underflow {
            c(0.0, 0.0)
        } else {
            let nf = n as f64;
            let sigma = divisor_sigma(1.0 - 2.0 * s, n);
            ln_abs_pow(nu, nf.ln()) * sigma * k.value * (TAU * nf * x).cos()
        };
        sum += term;
        last = term.norm();
        let scale = constant.norm().max(sum.norm() * 4.0 * y.sqrt()).max(1e-300);
        if arg > monotone_from && 4.0 * y.sqrt() * last < tol * scale {
            small += 1;
        } else {
            small = 0;
        }
    }
    let factor = NORMALIZATION.to_f64();
    let value = factor * (constant + 4.0 * y.sqrt() * sum);
    Ok(EvalReport {
        value,
        error_estimate: factor * 4.0 * y.sqrt() * last + 1e-15 * value.norm(),
        terms: n,
        quadrature: None,
        flags: Vec::new(),
    })
}

fn divisor_sigma(power: Complex, n: usize) -> Complex {
    let mut total = c(0.0, 0.0);
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            total += ln_abs_pow(power, (d as f64).ln());
            let e = n / d;
            if e != d {
                total += ln_abs_pow(power, (e as f64).ln());
            }
        }
        d += 1;
    }
    total
}

/// Recovers [`NORMALIZATION`]: the ratio of the lattice sum to the raw
/// expansion at s = 5/2, z = 0.2 + 1.1i, rounded to the nearest fraction with
/// denominator at most 12.
pub fn calibrate_normalization() -> Result<Rational> {
    let s = c(2.5, 0.0);
    let z = UpperHalfPoint::new(0.2, 1.1)?;
    let direct = eval_direct_lattice(s, z)?.value;
    let raw = eval_completed_eisenstein(s, z, 1e-14)?.value / NORMALIZATION.to_f64();
    let ratio = direct / raw;
    if ratio.im.abs() > 1e-6 {
        return Err(Error::domain(format!("normalization ratio is not real: {ratio}")));
    }
    for den in 1..=12i128 {
        let num = (ratio.re * den as f64).round();
        if (num / den as f64 - ratio.re).abs() < 1e-6 {
            return Rational::new(num as i128, den);
        }
    }
    Err(Error::domain(format!("normalization ratio {ratio} is not a small rational")))
}

/// Residue data at s = 1. Only ξ(2s−1) y^{1−s} is singular there, and
/// ξ(w) = π^{−w/2}Γ(w/2)ζ(w) has residue 1 at w = 1, so E* has residue ½,
/// independent of z.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidueData {
    /// Residue of ζ(w) at w = 1.
    pub zeta_residue: f64,
    /// ds/dw for w = 2s − 1.
    pub chain_factor: f64,
    /// π^{−1/2} Γ(1/2) at w = 1.
    pub gamma_weight: f64,
    pub residue: f64,
}

pub fn residue_at_one() -> ResidueData {
    ResidueData {
        zeta_residue: 1.0,
        chain_factor: 0.5,
        gamma_weight: 1.0,
        residue: 0.5,
    }
}

fn weight_of(series: &CoefficientSeries, which: &str) -> Result<u32> {
    match series.spectral {
        SpectralData::Holomorphic { weight } => Ok(weight),
        _ => Err(Error::domain(format!("{which} must be a holomorphic form"))),
    }
}

// Σ_{n≥0} a_n e(nz) truncated once |q|^n n^k is negligible.
fn q_series(series: &CoefficientSeries, z: UpperHalfPoint, k: u32) -> Result<Complex> {
    let q = Complex::from_polar((-TAU * z.y).exp(), TAU * z.x);
    let mut value = match series.constant_term {
        ConstantTerm::Value(v) => v,
        ConstantTerm::Zero => c(0.0, 0.0),
        ConstantTerm::Pole => return Err(Error::domain("constant term is a pole")),
    };
    let mut qn = c(1.0, 0.0);
    let qa = q.norm();
    for n in 1.. {
        qn *= q;
        let bound = qa.powi(n as i32 - 1) * (n as f64).powi(k as i32);
        if bound < 1e-22 {
            break;
        }
        let a = series.get(n).ok_or_else(|| {
            Error::Truncation(format!("q-expansion at y = {} needs more than {} coefficients", z.y, series.len()))
        })?;
        value += a * qn;
    }
    Ok(value)
}

/// (π^{−s}Γ(s)) · (4π)^{1−s−k} Γ(s+k−1): the Gamma factor relating I(s) to
/// ζ(2s) Σ a_n conj(b_n) n^{1−s−k}.
pub fn unfolding_prefactor(k: u32, s: Complex) -> Result<Complex> {
    let kf = k as f64;
    Ok((-s * PI.ln()).exp()
        * complex_gamma(s)?
        * ((1.0 - s - kf) * (4.0 * PI).ln()).exp()
        * complex_gamma(s + kf - 1.0)?)
}

/// I(s) = ∫_{Γ\H} y^{k−2} F(z) conj(G(z)) E*(s, z) dx dy over the standard
/// fundamental domain, truncated at a height Y beyond which the integrand
/// is below `tol` of its size at the bottom of the domain.
///
/// The domain is meshed as x ∈ [−½, ½] by Gauss–Legendre and, for each x,
/// y ∈ [√(1−x²), Y] by Gauss–Legendre panels. The mesh is refined until two
/// successive levels agree to `tol` relative.
pub fn rankin_selberg_integral(f: &CoefficientSeries, g: &CoefficientSeries, s: Complex, tol: f64) -> Result<EvalReport> {
    let k = weight_of(f, "F")?;
    let kg = weight_of(g, "G")?;
    if k != kg {
        return Err(Error::domain(format!("weight mismatch: {k} and {kg}")));
    }
    if !f.is_cuspidal() {
        return Err(Error::domain("F must be cuspidal (a_0 = 0)"));
    }
    if s == c(1.0, 0.0) || s == c(0.0, 0.0) {
        return Err(Error::Pole {
            function: "rankin_selberg_integral",
            at: s,
        });
    }
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    if f.to_complex().iter().all(|a| *a == c(0.0, 0.0)) {
        return Ok(EvalReport {
            value: c(0.0, 0.0),
            error_estimate: 0.0,
            terms: 0,
            quadrature: None,
            flags: vec!["F is identically zero".to_string()],
        });
    }

    let decay = TAU * if g.is_cuspidal() { 2.0 } else { 1.0 };
    let y_low = 3f64.sqrt() / 2.0;
    let growth = k as f64 + s.re.abs().max((1.0 - s.re).abs()) + 1.0;
    let mut top = y_low + 1.0;
    while -decay * (top - y_low) + growth * (top / y_low).ln() > (tol * 1e-2).ln() {
        top += 0.25;
    }

    let eis_tol = tol * 1e-3;
    let integrand = |x: f64, y: f64| -> Result<Complex> {
        let z = UpperHalfPoint { x, y };
        let fz = q_series(f, z, k)?;
        let gz = q_series(g, z, k)?;
        let e = expansion_at_reduced(s, z, eis_tol)?;
        Ok(y.powi(k as i32 - 2) * fz * gz.conj() * e)
    };

    let mut levels = [(16usize, 10usize, 0.5f64), (24, 14, 0.4), (32, 18, 0.3), (48, 24, 0.25)].into_iter();
    let (nx, ny, h) = levels.next().expect("levels");
    let mut prev = mesh_integral(&integrand, nx, ny, h, top)?;
    let mut evaluations = prev.1;
    let mut last_diff = f64::INFINITY;
    for (nx, ny, h) in levels {
        let (cur, evals) = mesh_integral(&integrand, nx, ny, h, top)?;
        evaluations += evals;
        let diff = (cur - prev.0).norm();
        last_diff = diff;
        prev = (cur, evals);
        if diff <= tol * cur.norm() {
            break;
        }
    }
    let value = prev.0;
    let tail = integrand(0.0, top)?.norm() / decay;
    let q = QuadratureResult {
        value,
        abs_error_estimate: last_diff + tail,
        evaluations,
    };
    if last_diff > tol * value.norm() {
        return Err(Error::Quadrature(q));
    }
    Ok(EvalReport {
        value,
        error_estimate: q.abs_error_estimate,
        terms: evaluations,
        quadrature: Some(q),
        flags: Vec::new(),
    })
}

// mesh points already lie in the fundamental domain
fn expansion_at_reduced(s: Complex, z: UpperHalfPoint, tol: f64) -> Result<Complex> {
    if (s - 0.5).norm() >= CENTER_RADIUS / 4.0 {
        Ok(expansion(s, z, tol)?.value)
    } else {
        Ok(eval_completed_eisenstein(s, z, tol)?.value)
    }
}

fn mesh_integral<F>(integrand: &F, nx: usize, ny: usize, h: f64, top: f64) -> Result<(Complex, usize)>
where
    F: Fn(f64, f64) -> Result<Complex> + Sync,
{
    let (gx, wx) = gauss_legendre(nx);
    let (gy, wy) = gauss_legendre(ny);
    let columns: Vec<Result<(Complex, usize)>> = gx
        .par_iter()
        .zip(wx.par_iter())
        .map(|(&u, &wu)| {
            let x = 0.5 * u;
            let bottom = (1.0 - x * x).sqrt();
            let panels = ((top - bottom) / h).ceil().max(1.0) as usize;
            let width = (top - bottom) / panels as f64;
            let mut col = c(0.0, 0.0);
            let mut count = 0;
            for p in 0..panels {
                let a = bottom + p as f64 * width;
                for (&v, &wv) in gy.iter().zip(&wy) {
                    let y = a + 0.5 * width * (v + 1.0);
                    col += integrand(x, y)? * (0.5 * width * wv);
                    count += 1;
                }
            }
            Ok((col * (0.5 * wu), count))
        })
        .collect();
    let mut total = c(0.0, 0.0);
    let mut evaluations = 0;
    for col in columns {
        let (v, n) = col?;
        total += v;
        evaluations += n;
    }
    Ok((total, evaluations))
}

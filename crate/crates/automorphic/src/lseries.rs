//! Standard, Maass and Rankin–Selberg L-functions: Dirichlet series with
//! tail bounds, completed values continued to all of ℂ, and
//! functional-equation residuals.
//!
//! Dirichlet series are taken in the unitary normalization, so the
//! functional equation always relates s and 1 − s.

use serde::Serialize;

use crate::coefficients::{CoefficientSeries, Normalization, SpectralData};
use crate::eisenstein::{rankin_selberg_integral, unfolding_prefactor};
use crate::error::{Error, Result};
use crate::gamma_factors::{linfty_product, prop1_for, Atom, AtomKind, FourthRoot, GammaFactorExpr};
use crate::numerics::{
    bessel_k, c, complex_gamma, integrate_adaptive, riemann_zeta, upper_incomplete_gamma, Complex, EvalReport,
    QuadratureResult, PI, TAU,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum LKind {
    Standard,
    /// L(s, F ⊗ Ḡ) with the partner G; F is the cuspidal member.
    RankinSelberg(Box<CoefficientSeries>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LSeriesSpec {
    pub coefficients: CoefficientSeries,
    pub spectral: SpectralData,
    pub kind: LKind,
}

impl LSeriesSpec {
    pub fn standard(series: CoefficientSeries) -> Self {
        LSeriesSpec {
            spectral: series.spectral.clone(),
            coefficients: series,
            kind: LKind::Standard,
        }
    }

    pub fn rankin_selberg(f: CoefficientSeries, g: CoefficientSeries) -> Result<Self> {
        if f.len() != g.len() {
            return Err(Error::domain(format!(
                "Rankin–Selberg pair needs matching index ranges, got {} and {}",
                f.len(),
                g.len()
            )));
        }
        if !f.is_cuspidal() {
            return Err(Error::domain("the first member of a Rankin–Selberg pair must be cuspidal"));
        }
        Ok(LSeriesSpec {
            spectral: f.spectral.clone(),
            coefficients: f,
            kind: LKind::RankinSelberg(Box::new(g)),
        })
    }

    fn partner(&self) -> Option<&CoefficientSeries> {
        match &self.kind {
            LKind::Standard => None,
            LKind::RankinSelberg(g) => Some(g),
        }
    }
}

/// Coefficients in the unitary normalization, index 0 holding a_1.
fn unitary(series: &CoefficientSeries) -> Vec<Complex> {
    series.to_unitary().to_complex()
}

fn arithmetic(series: &CoefficientSeries) -> Vec<Complex> {
    match (&series.spectral, series.normalization) {
        (SpectralData::Holomorphic { weight }, Normalization::Unitary) => {
            let shift = (*weight as f64 - 1.0) / 2.0;
            series
                .to_complex()
                .into_iter()
                .enumerate()
                .map(|(i, a)| a * ((i + 1) as f64).powf(shift))
                .collect()
        }
        _ => series.to_complex(),
    }
}

/// Abscissa of absolute convergence of Σ a_n n^{−s} in the unitary
/// normalization.
fn convergence_abscissa(spec: &LSeriesSpec) -> Result<f64> {
    let single = |sd: &SpectralData, norm: Normalization| -> Result<f64> {
        match sd {
            SpectralData::Holomorphic { .. } => Ok(1.0),
            SpectralData::Maass { lambda, .. } => Ok(match norm {
                Normalization::Unitary => 1.0 + lambda.re.abs() / 2.0,
                Normalization::Arithmetic => 1.0 + (-lambda.re).max(0.0),
            }),
            SpectralData::Gl4 { .. } => Err(Error::domain("standard GL(4) L-functions are not supported")),
        }
    };
    let a = single(&spec.spectral, spec.coefficients.normalization)?;
    match spec.partner() {
        None => Ok(a),
        Some(g) => Ok(a + single(&g.spectral, g.normalization)? - 1.0),
    }
}

fn divisor_counts(n: usize) -> Vec<f64> {
    let mut d = vec![0.0; n + 1];
    for i in 1..=n {
        for m in (i..=n).step_by(i) {
            d[m] += 1.0;
        }
    }
    d
}

fn hecke_holomorphic(series: &CoefficientSeries) -> bool {
    series.hecke_normalized && matches!(series.spectral, SpectralData::Holomorphic { .. })
}

/// Partial sum Σ_{n≤N} a_n n^{−s} (times ζ(2s) for a Rankin–Selberg pair,
/// whose coefficients are a_n conj(b_n)).
///
/// For holomorphic Hecke eigenforms the tail bound is rigorous: Deligne's
/// |a_n| ≤ |a_1| d(n) gives tail ≤ |a_1|(ζ(σ)² − Σ_{n≤N} d(n) n^{−σ}), and
/// ζ(σ)⁴/ζ(2σ) − Σ d(n)² n^{−σ} for a pair. Otherwise the bound is the
/// largest |a_n| over the upper half of the data times N^{1−σ}/(σ−1), and
/// is flagged heuristic.
pub fn dirichlet_eval(spec: &LSeriesSpec, s: Complex, n_terms: usize) -> Result<EvalReport> {
    let sigma_c = convergence_abscissa(spec)?;
    if s.re <= sigma_c {
        return Err(Error::domain(format!(
            "Dirichlet series converges absolutely only for Re s > {sigma_c}, got {s}"
        )));
    }
    let n = n_terms.min(spec.coefficients.len());
    if n == 0 {
        return Err(Error::domain("no coefficients to sum"));
    }
    let a = unitary(&spec.coefficients);
    let coeffs: Vec<Complex> = match spec.partner() {
        None => a[..n].to_vec(),
        Some(g) => {
            let b = unitary(g);
            a.iter().zip(&b).take(n).map(|(x, y)| x * y.conj()).collect()
        }
    };
    let mut sum = c(0.0, 0.0);
    for (i, an) in coeffs.iter().enumerate().rev() {
        let nf = (i + 1) as f64;
        sum += an * (-s * nf.ln()).exp();
    }
    let sigma = s.re;
    let mut flags = Vec::new();
    let tail;
    let rigorous = hecke_holomorphic(&spec.coefficients) && spec.partner().is_none_or(hecke_holomorphic);
    if rigorous {
        let d = divisor_counts(n);
        let zeta = riemann_zeta(c(sigma, 0.0))?.re;
        let (total, power) = match spec.partner() {
            None => (zeta * zeta, 1),
            Some(_) => (zeta.powi(4) / riemann_zeta(c(2.0 * sigma, 0.0))?.re, 2),
        };
        let partial: f64 = (1..=n).rev().map(|m| d[m].powi(power) * (m as f64).powf(-sigma)).sum();
        let a1 = a[0].norm() * spec.partner().map_or(1.0, |g| unitary(g)[0].norm());
        tail = a1 * ((total - partial).max(0.0) + 4e-16 * total);
    } else {
        let upper = coeffs[n / 2..].iter().map(|z| z.norm()).fold(0.0, f64::max);
        tail = upper * (n as f64).powf(1.0 - sigma) / (sigma - 1.0);
        flags.push("heuristic tail bound".to_string());
    }
    let (value, tail) = match spec.partner() {
        None => (sum, tail),
        Some(_) => {
            let z = riemann_zeta(2.0 * s)?;
            (z * sum, z.norm() * tail)
        }
    };
    Ok(EvalReport {
        value,
        error_estimate: tail,
        terms: n,
        quadrature: None,
        flags,
    })
}

/// L(s, F ⊗ Ḡ) for Re s > 1 by direct summation with the tail replaced by
/// its mean-value extrapolation c N^{1−s}/(s−1), c = (1/N) Σ_{n≤N} a_n conj(b_n).
/// The extrapolation is flagged as heuristic.
pub fn rankin_selberg_series(spec: &LSeriesSpec, s: Complex) -> Result<EvalReport> {
    let g = spec
        .partner()
        .ok_or_else(|| Error::domain("rankin_selberg_series needs a Rankin–Selberg pair"))?;
    if s.re <= 1.0 {
        return Err(Error::domain(format!("series route needs Re s > 1, got {s}")));
    }
    let a = unitary(&spec.coefficients);
    let b = unitary(g);
    let n = a.len();
    let (mut sum, mut mass) = (c(0.0, 0.0), c(0.0, 0.0));
    for i in (0..n).rev() {
        let ab = a[i] * b[i].conj();
        mass += ab;
        sum += ab * (-s * ((i + 1) as f64).ln()).exp();
    }
    let nf = n as f64;
    let tail = mass / nf * ((1.0 - s) * nf.ln()).exp() / (s - 1.0);
    let z = riemann_zeta(2.0 * s)?;
    Ok(EvalReport {
        value: z * (sum + tail),
        error_estimate: (z * tail).norm() * nf.powf(-0.4),
        terms: n,
        quadrature: None,
        flags: vec!["mean-value tail extrapolation".to_string()],
    })
}

fn holomorphic_weight(series: &CoefficientSeries) -> Result<u32> {
    match series.spectral {
        SpectralData::Holomorphic { weight } => Ok(weight),
        _ => Err(Error::domain("expected a holomorphic form")),
    }
}

/// Λ(w) = (2π)^{−w} Γ(w) L(w − (k−1)/2, F) for a holomorphic cusp form,
/// continued to all w by splitting the Mellin integral at y = 1:
///
/// Λ(w) = Σ a_n (2πn)^{−w} Γ(w, 2πn) + i^k Σ a_n (2πn)^{w−k} Γ(k−w, 2πn),
///
/// with arithmetic coefficients a_n.
pub fn completed_hecke_l(f: &CoefficientSeries, w: Complex) -> Result<EvalReport> {
    let k = holomorphic_weight(f)?;
    if !f.is_cuspidal() {
        return Err(Error::domain("completed_hecke_l needs a cusp form"));
    }
    let a = arithmetic(f);
    let kf = k as f64;
    let sign = FourthRoot((k % 4) as u8).value();
    let mut sum = c(0.0, 0.0);
    let mut used = 0;
    let mut small = 0;
    let mut last = 0.0;
    let turn = (w.norm() + kf) / TAU + 1.0;
    for (i, an) in a.iter().enumerate() {
        let nf = (i + 1) as f64;
        let x = TAU * nf;
        let lx = x.ln();
        let first = (-w * lx).exp() * upper_incomplete_gamma(w, x)?.value;
        let second = ((w - kf) * lx).exp() * upper_incomplete_gamma(kf - w, x)?.value;
        let term = an * (first + sign * second);
        sum += term;
        used = i + 1;
        last = an.norm() * (-x).exp();
        if nf > turn && last <= 1e-18 * sum.norm().max(1e-300) {
            small += 1;
            if small == 2 {
                break;
            }
        } else {
            small = 0;
        }
    }
    if small < 2 && !a.iter().all(|z| *z == c(0.0, 0.0)) {
        return Err(Error::Truncation(format!(
            "completed L at w = {w} needs more than {} coefficients",
            a.len()
        )));
    }
    Ok(EvalReport {
        value: sum,
        error_estimate: last + 1e-15 * sum.norm(),
        terms: used,
        quadrature: None,
        flags: Vec::new(),
    })
}

fn maass_parameters(series: &CoefficientSeries) -> Result<(Complex, u8)> {
    match series.spectral {
        SpectralData::Maass { lambda, parity } => Ok((lambda / 2.0, parity % 2)),
        _ => Err(Error::domain("expected Maass spectral data")),
    }
}

// A^η ∫_1^∞ K_ν(Ay) y^{w+η−1} dy
fn maass_tail_integral(nu: Complex, eta: u8, w: Complex, a: f64, tol: f64) -> Result<QuadratureResult> {
    let shift = w.re.abs() + 2.0;
    let top = 1.0 + (40.0 + shift * (1.0 + 40.0 / a).ln()) / a;
    let err = std::cell::RefCell::new(None);
    let power = w + eta as f64 - 1.0;
    let q = integrate_adaptive(
        |y: f64| match bessel_k(nu, a * y) {
            Ok(k) => k.value * (power * y.ln()).exp(),
            Err(e) => {
                err.borrow_mut().get_or_insert(e);
                c(0.0, 0.0)
            }
        },
        1.0,
        top,
        tol,
    )?;
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    let scale = a.powi(eta as i32);
    Ok(QuadratureResult {
        value: q.value * scale,
        abs_error_estimate: q.abs_error_estimate * scale,
        evaluations: q.evaluations,
    })
}

/// Completed L-function of a Maass form with spectral parameter λ and
/// parity η, continued by the split Mellin integral
///
/// Λ(s) = 2 i^η Σ_n a_n [J_η(s, 2πn) + (−1)^η J_η(1−s, 2πn)],
/// J_η(w, A) = A^η ∫_1^∞ K_{λ/2}(Ay) y^{w+η−1} dy,
///
/// which equals (i^η / 2^{1−η}) π^{−s} Γ((s+η+λ/2)/2) Γ((s+η−λ/2)/2) L(s).
/// Odd forms enter through ∂_x of the form on the imaginary axis.
pub fn completed_maass_l(series: &CoefficientSeries, s: Complex, tol: f64) -> Result<EvalReport> {
    let (nu, eta) = maass_parameters(series)?;
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    let a = series.to_complex();
    let parity = if eta == 0 { 1.0 } else { -1.0 };
    let front = 2.0 * FourthRoot(eta).value();
    let amax = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut sum = c(0.0, 0.0);
    let mut err = 0.0;
    let mut evaluations = 0;
    let mut used = 0;
    let mut bound = f64::INFINITY;
    for (i, an) in a.iter().enumerate() {
        let x = TAU * (i + 1) as f64;
        // beyond this point K_ν(xy) ≤ K_{Re ν}(x) e^{−x(y−1)}, so the rest
        // of the series is below amax · e^{−x} · (polynomial)
        bound = amax * (-x).exp() * x.powf(s.re.abs() + nu.re.abs() + 2.0) * 2.0;
        if x > nu.norm() + 5.0 && bound <= tol * sum.norm().max(1e-300) {
            break;
        }
        used = i + 1;
        if *an == c(0.0, 0.0) {
            continue;
        }
        let j1 = maass_tail_integral(nu, eta, s, x, tol * 1e-3)?;
        let j2 = maass_tail_integral(nu, eta, 1.0 - s, x, tol * 1e-3)?;
        sum += an * (j1.value + parity * j2.value);
        err += an.norm() * (j1.abs_error_estimate + j2.abs_error_estimate);
        evaluations += j1.evaluations + j2.evaluations;
    }
    let mut flags = Vec::new();
    if used == a.len() && bound > tol * sum.norm() {
        flags.push("truncation-insufficient: coefficient data too short for tol".to_string());
        err += bound;
    }
    let value = front * sum;
    Ok(EvalReport {
        value,
        error_estimate: 2.0 * err,
        terms: used,
        quadrature: Some(QuadratureResult {
            value,
            abs_error_estimate: 2.0 * err,
            evaluations,
        }),
        flags,
    })
}

/// The Dirichlet route to the Maass completed value, for Re s beyond the
/// convergence abscissa: (i^η / 2^{1−η}) π^{−s} Γ((s+η+ν)/2) Γ((s+η−ν)/2) Σ a_n n^{−s}.
pub fn maass_completed_by_series(series: &CoefficientSeries, s: Complex) -> Result<EvalReport> {
    let (nu, eta) = maass_parameters(series)?;
    let spec = LSeriesSpec::standard(series.clone());
    let l = dirichlet_eval(&spec, s, series.len())?;
    let e = eta as f64;
    let gamma = FourthRoot(eta).value() / 2f64.powf(1.0 - e)
        * (-s * PI.ln()).exp()
        * complex_gamma((s + e + nu) / 2.0)?
        * complex_gamma((s + e - nu) / 2.0)?;
    Ok(EvalReport {
        value: gamma * l.value,
        error_estimate: gamma.norm() * l.error_estimate,
        ..l
    })
}

/// L(s, F ⊗ Ḡ) = ζ(2s) Σ a_n conj(b_n) n^{−s} (unitary), continued through
/// the fundamental-domain integral: I(s) divided by its Gamma prefactor,
/// which has no zeros. Where the prefactor has a pole (s a negative integer,
/// or s + k − 1 a non-positive integer) the integral stays finite and the
/// L-value is exactly 0.
pub fn rankin_selberg_l(spec: &LSeriesSpec, s: Complex, tol: f64) -> Result<EvalReport> {
    let g = spec
        .partner()
        .ok_or_else(|| Error::domain("rankin_selberg_l needs a Rankin–Selberg pair"))?;
    let k = holomorphic_weight(&spec.coefficients)?;
    if (s - 1.0).norm() == 0.0 {
        return Err(Error::Pole {
            function: "rankin_selberg_l",
            at: s,
        });
    }
    let gamma_pole = |z: Complex| z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0;
    if s != c(0.0, 0.0) && (gamma_pole(s) || gamma_pole(s + k as f64 - 1.0)) {
        return Ok(EvalReport {
            value: c(0.0, 0.0),
            error_estimate: 0.0,
            terms: 0,
            quadrature: None,
            flags: vec!["trivial zero".to_string()],
        });
    }
    let pre = unfolding_prefactor(k, s)?;
    let i = rankin_selberg_integral(&spec.coefficients, g, s, tol)?;
    let mut flags = i.flags.clone();
    if (s - 1.0).norm() < 0.05 {
        flags.push("near the pole at s = 1".to_string());
    }
    Ok(EvalReport {
        value: i.value / pre,
        error_estimate: i.error_estimate / pre.norm(),
        flags,
        ..i
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FEKind {
    /// Λ(w) against i^k Λ(k − w).
    Hecke,
    /// Λ(s) against (−1)^η Λ(1 − s).
    Maass,
    /// I(s) against I(1 − s).
    RankinSelberg,
    /// L(1 − s) against Φ(s) L(s).
    Prop1,
    /// L∞(s) L(s) against L∞(1 − s) L(1 − s) for a pair.
    Completed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FEReport {
    pub s: Complex,
    pub lhs: Complex,
    pub rhs: Complex,
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub gamma_expr_used: GammaFactorExpr,
}

impl FEReport {
    fn new(s: Complex, lhs: Complex, rhs: Complex, expr: GammaFactorExpr) -> Self {
        let abs = (lhs - rhs).norm();
        let scale = lhs.norm().max(rhs.norm());
        FEReport {
            s,
            lhs,
            rhs,
            abs_residual: abs,
            rel_residual: if scale > 0.0 { abs / scale } else { 0.0 },
            gamma_expr_used: expr,
        }
    }

    pub fn recomputed(&self) -> (f64, f64) {
        let abs = (self.lhs - self.rhs).norm();
        let scale = self.lhs.norm().max(self.rhs.norm());
        (abs, if scale > 0.0 { abs / scale } else { 0.0 })
    }
}

/// Both sides of a functional equation at `s`, with the Gamma expression
/// that enters it.
pub fn fe_residual(kind: FEKind, spec: &LSeriesSpec, s: Complex, tol: f64) -> Result<FEReport> {
    match kind {
        FEKind::Hecke => {
            let k = holomorphic_weight(&spec.coefficients)?;
            let kf = k as f64;
            let lhs = completed_hecke_l(&spec.coefficients, s)?.value;
            let rhs = FourthRoot((k % 4) as u8).value() * completed_hecke_l(&spec.coefficients, kf - s)?.value;
            // (2π)^{−w} Γ(w) = Γ_C(w) / 2
            let expr = GammaFactorExpr::new(vec![
                Atom::new(AtomKind::Const(c(0.5, 0.0)), 1, c(0.0, 0.0)),
                Atom::new(AtomKind::GammaC, 1, c(0.0, 0.0)),
            ]);
            Ok(FEReport::new(s, lhs, rhs, expr))
        }
        FEKind::Maass => {
            let (nu, eta) = maass_parameters(&spec.coefficients)?;
            let lhs = completed_maass_l(&spec.coefficients, s, tol)?.value;
            let sign = if eta == 0 { 1.0 } else { -1.0 };
            let rhs = sign * completed_maass_l(&spec.coefficients, 1.0 - s, tol)?.value;
            let e = eta as f64;
            let expr = GammaFactorExpr::new(vec![
                Atom::new(AtomKind::GammaR, 1, nu + e),
                Atom::new(AtomKind::GammaR, 1, -nu + e),
            ]);
            Ok(FEReport::new(s, lhs, rhs, expr))
        }
        FEKind::RankinSelberg => {
            let g = spec
                .partner()
                .ok_or_else(|| Error::domain("Rankin–Selberg check needs a pair"))?;
            let lhs = rankin_selberg_integral(&spec.coefficients, g, s, tol)?.value;
            let rhs = rankin_selberg_integral(&spec.coefficients, g, 1.0 - s, tol)?.value;
            Ok(FEReport::new(s, lhs, rhs, linfty_product(&spec.spectral, &g.spectral)?))
        }
        FEKind::Prop1 => {
            let g = spec
                .partner()
                .ok_or_else(|| Error::domain("Prop 1 check needs a pair"))?;
            let phi = prop1_for(&spec.spectral, &g.spectral)?;
            let lhs = rankin_selberg_l(spec, 1.0 - s, tol)?.value;
            let rhs = phi.eval(s)? * rankin_selberg_l(spec, s, tol)?.value;
            Ok(FEReport::new(s, lhs, rhs, phi))
        }
        FEKind::Completed => {
            let g = spec
                .partner()
                .ok_or_else(|| Error::domain("completed check needs a pair"))?;
            let linf = linfty_product(&spec.spectral, &g.spectral)?;
            let lhs = linf.eval(s)? * rankin_selberg_l(spec, s, tol)?.value;
            let rhs = linf.reflect().eval(s)? * rankin_selberg_l(spec, 1.0 - s, tol)?.value;
            Ok(FEReport::new(s, lhs, rhs, linf))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{delta_coefficients, divisor_power_coeffs, eisenstein_qcoeffs, Values};

    fn delta() -> CoefficientSeries {
        delta_coefficients(80).unwrap()
    }

    #[test]
    fn zero_coefficients_give_zero() {
        let z = CoefficientSeries::zeros(SpectralData::Holomorphic { weight: 12 }, 30);
        let spec = LSeriesSpec::standard(z.clone());
        assert_eq!(dirichlet_eval(&spec, c(3.0, 0.0), 30).unwrap().value, c(0.0, 0.0));
        assert_eq!(completed_hecke_l(&z, c(6.0, 1.0)).unwrap().value, c(0.0, 0.0));
    }

    #[test]
    fn delta_partial_sums_stabilize() {
        let spec = LSeriesSpec::standard(delta_coefficients(100).unwrap());
        let a = dirichlet_eval(&spec, c(12.0, 0.0), 50).unwrap();
        let b = dirichlet_eval(&spec, c(12.0, 0.0), 100).unwrap();
        assert!((a.value - b.value).norm() <= 1e-12);
        assert!(a.flags.is_empty());
        assert!((a.value - b.value).norm() <= a.error_estimate);
        assert!(dirichlet_eval(&spec, c(1.0, 0.0), 50).is_err());
    }

    #[test]
    fn rigorous_tail_bounds_the_difference() {
        let spec = LSeriesSpec::standard(delta_coefficients(4000).unwrap());
        for s in [c(1.5, 0.0), c(2.0, 3.0), c(3.0, 0.0)] {
            let short = dirichlet_eval(&spec, s, 200).unwrap();
            let long = dirichlet_eval(&spec, s, 4000).unwrap();
            assert!((short.value - long.value).norm() <= short.error_estimate);
        }
    }

    #[test]
    fn rankin_selberg_series_at_two() {
        let d = delta_coefficients(2000).unwrap();
        let spec = LSeriesSpec::rankin_selberg(d.clone(), d.clone()).unwrap();
        let r = dirichlet_eval(&spec, c(2.0, 0.0), 2000).unwrap();
        // direct oracle: ζ(4) Σ τ(n)² n^{−13}
        let mut sum = 0.0;
        for n in (1..=2000).rev() {
            let t = d.integer(n).unwrap() as f64;
            sum += t * t / (n as f64).powi(13);
        }
        let want = PI.powi(4) / 90.0 * sum;
        assert!((r.value.re - want).abs() < 1e-13 * want);
        assert!(r.error_estimate > 0.0);
        assert!(LSeriesSpec::rankin_selberg(eisenstein_qcoeffs(12, 2000).unwrap(), d).is_err());
    }

    #[test]
    fn completed_hecke_examples() {
        let d = delta();
        let spec = LSeriesSpec::standard(d.clone());
        let r = fe_residual(FEKind::Hecke, &spec, c(6.0, 3.0), 1e-12).unwrap();
        assert!(r.rel_residual <= 1e-9, "{r:?}");
        let centre = fe_residual(FEKind::Hecke, &spec, c(6.0, 0.0), 1e-12).unwrap();
        assert_eq!(centre.abs_residual, 0.0);
        assert_eq!(r.recomputed(), (r.abs_residual, r.rel_residual));

        let w = c(14.0, 0.0);
        let lam = completed_hecke_l(&d, w).unwrap().value;
        let l = dirichlet_eval(&spec, w - 5.5, 80).unwrap().value;
        let want = (-w * TAU.ln()).exp() * complex_gamma(w).unwrap() * l;
        assert!((lam - want).norm() <= 1e-10 * want.norm(), "{lam} {want}");
    }

    #[test]
    fn completed_hecke_has_no_poles() {
        let d = delta();
        for centre in [0.0, 12.0] {
            let mut mags: Vec<f64> = (0..20)
                .map(|j| {
                    let w = c(centre, 0.0) + Complex::from_polar(0.5, TAU * j as f64 / 20.0);
                    completed_hecke_l(&d, w).unwrap().value.norm()
                })
                .collect();
            mags.sort_by(f64::total_cmp);
            assert!(mags[19] <= 10.0 * mags[10], "{mags:?}");
            assert!(completed_hecke_l(&d, c(centre, 0.0)).unwrap().value.norm().is_finite());
        }
    }

    fn maass_stub(eta: u8) -> CoefficientSeries {
        let spectral = SpectralData::Maass {
            lambda: c(0.0, 2.0 * 9.53),
            parity: eta,
        };
        let mut v = vec![c(0.0, 0.0); 4];
        v[0] = c(1.0, 0.0);
        v[1] = c(-0.4, 0.0);
        CoefficientSeries::new(spectral, Values::Complex(v), Normalization::Unitary)
    }

    #[test]
    fn maass_structural_symmetry() {
        for eta in [0, 1] {
            let spec = LSeriesSpec::standard(maass_stub(eta));
            for s in [c(0.5, 2.0), c(0.2, -1.0), c(3.0, 0.5)] {
                let r = fe_residual(FEKind::Maass, &spec, s, 1e-12).unwrap();
                assert!(r.abs_residual <= 1e-12 * r.lhs.norm().max(1.0), "{r:?}");
            }
        }
    }

    #[test]
    fn maass_tail_integral_completes_the_mellin_transform() {
        // J over [1, ∞) plus a direct integral over (0, 1] gives the closed
        // form A^{−s} 2^{s+η−2} Γ((s+η+ν)/2) Γ((s+η−ν)/2)
        let nu = c(0.0, 4.0);
        for eta in [0u8, 1] {
            let (s, a) = (c(2.5, 0.7), 3.0);
            let e = eta as f64;
            let upper = maass_tail_integral(nu, eta, s, a, 1e-13).unwrap().value;
            let lower = crate::numerics::integrate_endpoint_singular(
                |n: crate::numerics::Node| {
                    bessel_k(nu, a * n.x).unwrap().value * ((s + e - 1.0) * n.x.ln()).exp() * a.powi(eta as i32)
                },
                0.0,
                1.0,
                1e-13,
            )
            .unwrap()
            .value;
            let want = (-s * a.ln()).exp()
                * ((s + e - 2.0) * 2f64.ln()).exp()
                * complex_gamma((s + e + nu) / 2.0).unwrap()
                * complex_gamma((s + e - nu) / 2.0).unwrap();
            assert!((upper + lower - want).norm() <= 1e-10 * want.norm(), "{eta}: {} {want}", upper + lower);
        }
    }

    #[test]
    fn maass_series_route_needs_convergence() {
        let stub = maass_stub(0);
        assert!(maass_completed_by_series(&stub, c(0.5, 0.0)).is_err());
        assert!(maass_completed_by_series(&stub, c(3.0, 0.0)).is_ok());
        let div = divisor_power_coeffs(c(0.3, 0.0), 50).unwrap();
        assert!(dirichlet_eval(&LSeriesSpec::standard(div), c(1.2, 0.0), 50).unwrap().flags.len() == 1);
    }

    #[test]
    fn rankin_selberg_routes_agree() {
        let d = delta_coefficients(100_000).unwrap();
        let short = delta_coefficients(60).unwrap();
        let full = LSeriesSpec::rankin_selberg(d.clone(), d).unwrap();
        let pair = LSeriesSpec::rankin_selberg(short.clone(), short).unwrap();
        let s = c(2.0, 0.0);
        let integral = rankin_selberg_l(&pair, s, 1e-9).unwrap().value;
        let series = rankin_selberg_series(&full, s).unwrap().value;
        assert!((integral - series).norm() <= 1e-6 * series.norm(), "{integral} {series}");
    }

    #[test]
    fn prop1_and_completed_forms() {
        let d = delta_coefficients(60).unwrap();
        let pair = LSeriesSpec::rankin_selberg(d.clone(), d).unwrap();
        let r = fe_residual(FEKind::Prop1, &pair, c(0.6, 0.0), 1e-9).unwrap();
        assert!(r.rel_residual <= 1e-5, "{r:?}");
        assert_eq!(r.gamma_expr_used.to_string().matches("G_0").count(), 4);
        let r = fe_residual(FEKind::Completed, &pair, c(0.45, 2.0), 1e-9).unwrap();
        assert!(r.rel_residual <= 1e-8, "{r:?}");
    }

    #[test]
    fn pole_at_one_has_petersson_residue() {
        // Res_{s=1} I(s) = ½ ⟨Δ, Δ⟩, ⟨Δ, Δ⟩ = 1.035362056804320922e−6
        let d = delta_coefficients(60).unwrap();
        let pair = LSeriesSpec::rankin_selberg(d.clone(), d.clone()).unwrap();
        for eps in [1e-4, -1e-4] {
            let s = c(1.0 + eps, 0.0);
            let i = rankin_selberg_integral(&d, &d, s, 1e-10).unwrap().value;
            assert!((i * eps - 0.5 * 1.035_362_056_804_321e-6).norm() < 1e-3 * 0.5e-6, "{}", i * eps);
        }
        let near = rankin_selberg_l(&pair, c(1.01, 0.0), 1e-9).unwrap();
        assert!(near.flags.iter().any(|f| f.contains("pole")));
        assert!(rankin_selberg_l(&pair, c(1.0, 0.0), 1e-9).is_err());
        assert_eq!(rankin_selberg_l(&pair, c(-2.0, 0.0), 1e-9).unwrap().value, c(0.0, 0.0));
        // approaching the trivial zero continuously
        let near = rankin_selberg_l(&pair, c(-2.0 + 1e-6, 0.0), 1e-9).unwrap().value.norm();
        let far = rankin_selberg_l(&pair, c(-2.0 + 1e-3, 0.0), 1e-9).unwrap().value.norm();
        assert!(near < 1e-2 * far, "{near} {far}");
    }
}

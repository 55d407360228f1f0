//! Independent quadrature checks of the closed-form archimedean integrals:
//! the exponential Mellin transform, G_η, the single and double K-Bessel
//! Mellin transforms, and the one-variable kernel identity behind the
//! intertwining-operator factor.

use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamma_factors::g_eta;
use crate::numerics::{
    bessel_k, c, complex_gamma, e_complex, format_complex, integrate_adaptive, integrate_endpoint_singular,
    integrate_oscillatory_mellin, parse_complex, Complex, Node, QuadratureResult, TAU,
};

const QUAD_TOL: f64 = 1e-11;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub identity_id: String,
    pub parameter_point: Vec<(String, String)>,
    pub lhs: Complex,
    pub rhs: Complex,
    pub abs_residual: f64,
    pub quadrature_diag: QuadratureResult,
}

impl IdentityReport {
    fn new(id: &str, params: Vec<(&str, String)>, lhs: Complex, rhs: Complex, q: QuadratureResult) -> Self {
        IdentityReport {
            identity_id: id.to_string(),
            parameter_point: params.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            lhs,
            rhs,
            abs_residual: (lhs - rhs).norm(),
            quadrature_diag: q,
        }
    }

    /// |lhs − rhs| recomputed from the stored sides.
    pub fn recomputed_residual(&self) -> f64 {
        (self.lhs - self.rhs).norm()
    }

    pub fn describe(&self) -> String {
        let params: Vec<String> = self.parameter_point.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{} {}", self.identity_id, params.join(" "))
    }
}

fn fc(z: Complex) -> String {
    format_complex(z)
}

fn strip_check(s: Complex) -> Result<()> {
    if !(s.re > 0.0 && s.re < 1.0) {
        return Err(Error::domain(format!("needs 0 < Re s < 1, got {s}")));
    }
    Ok(())
}

/// ∫_0^∞ e(±x) x^{s−1} dx = (2π)^{−s} Γ(s) e(±s/4) on 0 < Re s < 1.
pub fn verify_exponential_mellin(sign: i8, s: Complex) -> Result<IdentityReport> {
    strip_check(s)?;
    if sign != 1 && sign != -1 {
        return Err(Error::domain(format!("sign must be ±1, got {sign}")));
    }
    let q = integrate_oscillatory_mellin(sign as f64, s, 1e-10)?;
    let rhs = (-s * TAU.ln()).exp() * complex_gamma(s)? * e_complex(s * (sign as f64 / 4.0));
    Ok(IdentityReport::new(
        "exponential-mellin",
        vec![("sign", sign.to_string()), ("s", fc(s))],
        q.value,
        rhs,
        q,
    ))
}

/// ∫_ℝ e(x)(sgn x)^η |x|^{s−1} dx as two half-line integrals, against G_η(s).
pub fn verify_g_eta(eta: u8, s: Complex) -> Result<IdentityReport> {
    strip_check(s)?;
    let plus = integrate_oscillatory_mellin(1.0, s, 1e-10)?;
    let minus = integrate_oscillatory_mellin(-1.0, s, 1e-10)?;
    let parity = if eta % 2 == 0 { 1.0 } else { -1.0 };
    let q = QuadratureResult {
        value: plus.value + parity * minus.value,
        ..plus.combine(minus)
    };
    let rhs = g_eta(eta, s)?;
    Ok(IdentityReport::new(
        "g-eta",
        vec![("eta", (eta % 2).to_string()), ("s", fc(s))],
        q.value,
        rhs,
        q,
    ))
}

// ∫_0^∞ f(y) y^{s−1} dy for f decaying like e^{−decay·y} and growing at
// most like y^{−growth} at 0; requires Re s > growth.
fn mellin_of<F: Fn(f64) -> Result<Complex>>(f: F, s: Complex, growth: f64, decay: f64) -> Result<QuadratureResult> {
    let margin = s.re - growth;
    // below y0 the integrand's total mass is under ~1e−20
    let y0 = (1e-20f64).powf(1.0 / margin).min(1e-3);
    // beyond y1 the e^{−decay·y} factor kills everything
    let y1 = (60.0 + s.re.max(0.0) * 4.0) / decay;
    let err = std::cell::RefCell::new(None);
    let eval = |y: f64, ln_y: f64| -> Complex {
        if err.borrow().is_some() {
            return c(0.0, 0.0);
        }
        match f(y) {
            Ok(v) => v * ((s - 1.0) * ln_y).exp(),
            Err(e) => {
                *err.borrow_mut() = Some(e);
                c(0.0, 0.0)
            }
        }
    };
    let near = integrate_endpoint_singular(
        |n: Node| if n.x < y0 { c(0.0, 0.0) } else { eval(n.x, n.x.ln()) },
        0.0,
        1.0,
        QUAD_TOL,
    )?;
    let far = integrate_adaptive(|y: f64| eval(y, y.ln()), 1.0, y1, QUAD_TOL)?;
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    let mut q = near.combine(far);
    q.abs_error_estimate += 1e-20;
    Ok(q)
}

fn k_value(nu: Complex, y: f64) -> Result<Complex> {
    Ok(bessel_k(nu, y)?.value)
}

/// ∫_0^∞ K_ν(y) y^{s−1} dy = 2^{s−2} Γ((s−ν)/2) Γ((s+ν)/2), Re s > |Re ν|.
pub fn verify_bessel_single(nu: Complex, s: Complex) -> Result<IdentityReport> {
    if s.re <= nu.re.abs() {
        return Err(Error::domain(format!("needs Re s > |Re ν|, got s = {s}, ν = {nu}")));
    }
    let q = mellin_of(|y| k_value(nu, y), s, nu.re.abs(), 1.0)?;
    let rhs = ((s - 2.0) * 2f64.ln()).exp() * complex_gamma((s - nu) / 2.0)? * complex_gamma((s + nu) / 2.0)?;
    Ok(IdentityReport::new(
        "bessel-single",
        vec![("nu", fc(nu)), ("s", fc(s))],
        q.value,
        rhs,
        q,
    ))
}

/// ∫_0^∞ K_μ(y) K_ν(y) y^{s−1} dy
///   = 2^{s−3} Γ((s+μ+ν)/2) Γ((s+μ−ν)/2) Γ((s−μ+ν)/2) Γ((s−μ−ν)/2) / Γ(s),
/// Re s > |Re μ| + |Re ν|.
pub fn verify_bessel_double(mu: Complex, nu: Complex, s: Complex) -> Result<IdentityReport> {
    let growth = mu.re.abs() + nu.re.abs();
    if s.re <= growth {
        return Err(Error::domain(format!("needs Re s > |Re μ| + |Re ν|, got s = {s}")));
    }
    let q = mellin_of(|y| Ok(k_value(mu, y)? * k_value(nu, y)?), s, growth, 2.0)?;
    let rhs = bessel_double_closed_form(mu, nu, s)?;
    Ok(IdentityReport::new(
        "bessel-double",
        vec![("mu", fc(mu)), ("nu", fc(nu)), ("s", fc(s))],
        q.value,
        rhs,
        q,
    ))
}

pub fn bessel_double_closed_form(mu: Complex, nu: Complex, s: Complex) -> Result<Complex> {
    let g = |z: Complex| complex_gamma(z / 2.0);
    Ok(((s - 3.0) * 2f64.ln()).exp() * g(s + mu + nu)? * g(s + mu - nu)? * g(s - mu + nu)? * g(s - mu - nu)?
        / complex_gamma(s)?)
}

/// The kernel identity
///
/// ∫_ℝ (sgn (y−t)(t−x))^δ / (sgn (y−z)(z−x))^δ |x−t|^{α−1} |y−t|^{β−1} |z−t|^{−α−β} dt
///   = (−1)^δ G_δ(α) G_δ(β) / G_0(α+β) · |x−y|^{α+β−1} |x−z|^{−β} |y−z|^{−α},
///
/// on Re α > 0, Re β > 0, Re(α+β) < 1. The line is split at the three
/// points; each piece is integrated by double-exponential quadrature with
/// distances to the singular endpoints passed exactly.
pub fn verify_kernel_identity(x: f64, y: f64, z: f64, alpha: Complex, beta: Complex, delta: u8) -> Result<IdentityReport> {
    if !(alpha.re > 0.0 && beta.re > 0.0 && (alpha + beta).re < 1.0) {
        return Err(Error::domain(format!(
            "kernel integral needs Re α > 0, Re β > 0, Re(α+β) < 1; got α = {alpha}, β = {beta}"
        )));
    }
    if x == y || y == z || x == z || !(x.is_finite() && y.is_finite() && z.is_finite()) {
        return Err(Error::domain("kernel points must be finite and distinct"));
    }
    let delta = delta % 2;
    let sgn = |v: f64| if v < 0.0 { -1.0 } else { 1.0 };
    let norm_sign = if delta == 1 { sgn((y - z) * (z - x)) } else { 1.0 };
    // exponents per point
    let points = [(x, alpha - 1.0), (y, beta - 1.0), (z, -alpha - beta)];
    let mut sorted = [x, y, z];
    sorted.sort_by(f64::total_cmp);

    let weight = |t: f64| -> f64 {
        if delta == 1 {
            sgn((y - t) * (t - x)) / norm_sign
        } else {
            1.0
        }
    };
    // integrand from the distances to each point
    let kernel = |dist: [f64; 3]| -> Complex {
        let mut log = c(0.0, 0.0);
        for (k, (_, ex)) in points.iter().enumerate() {
            log += ex * dist[k].ln();
        }
        log.exp()
    };
    let distances = |t: f64, exact: &[(f64, f64)]| -> [f64; 3] {
        let mut d = [0.0; 3];
        for (k, (p, _)) in points.iter().enumerate() {
            d[k] = exact
                .iter()
                .find(|(q, _)| q == p)
                .map(|(_, dist)| *dist)
                .unwrap_or_else(|| (p - t).abs());
        }
        d
    };

    let mut total = QuadratureResult::zero();
    // left tail t = p₁ − u
    let p1 = sorted[0];
    let w = weight(p1 - 1.0);
    let left = integrate_endpoint_singular(
        |n: Node| kernel(distances(p1 - n.x, &[(p1, n.from_a)])) * w,
        0.0,
        f64::INFINITY,
        QUAD_TOL,
    )?;
    total = total.combine(left);
    for pair in sorted.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let w = weight(0.5 * (a + b));
        let piece = integrate_endpoint_singular(
            |n: Node| kernel(distances(n.x, &[(a, n.from_a), (b, n.to_b)])) * w,
            a,
            b,
            QUAD_TOL,
        )?;
        total = total.combine(piece);
    }
    let p3 = sorted[2];
    let w = weight(p3 + 1.0);
    let right = integrate_endpoint_singular(
        |n: Node| kernel(distances(p3 + n.x, &[(p3, n.from_a)])) * w,
        0.0,
        f64::INFINITY,
        QUAD_TOL,
    )?;
    total = total.combine(right);

    let sign = if delta == 1 { -1.0 } else { 1.0 };
    let pow = |base: f64, ex: Complex| (ex * base.abs().ln()).exp();
    let rhs = sign * g_eta(delta, alpha)? * g_eta(delta, beta)? / g_eta(0, alpha + beta)?
        * pow(x - y, alpha + beta - 1.0)
        * pow(x - z, -beta)
        * pow(y - z, -alpha);
    Ok(IdentityReport::new(
        "kernel",
        vec![
            ("x", x.to_string()),
            ("y", y.to_string()),
            ("z", z.to_string()),
            ("alpha", fc(alpha)),
            ("beta", fc(beta)),
            ("delta", delta.to_string()),
        ],
        total.value,
        rhs,
        total,
    ))
}

/// One line of the identity grid fixture.
#[derive(Debug, Clone, PartialEq)]
pub enum IdentityCase {
    ExponentialMellin { sign: i8, s: Complex },
    GEta { eta: u8, s: Complex },
    BesselSingle { nu: Complex, s: Complex },
    BesselDouble { mu: Complex, nu: Complex, s: Complex },
    Kernel { x: f64, y: f64, z: f64, alpha: Complex, beta: Complex, delta: u8 },
}

impl IdentityCase {
    pub fn id(&self) -> &'static str {
        match self {
            IdentityCase::ExponentialMellin { .. } => "exponential-mellin",
            IdentityCase::GEta { .. } => "g-eta",
            IdentityCase::BesselSingle { .. } => "bessel-single",
            IdentityCase::BesselDouble { .. } => "bessel-double",
            IdentityCase::Kernel { .. } => "kernel",
        }
    }

    /// Acceptance tolerance on the absolute residual.
    pub fn tolerance(&self) -> f64 {
        match self {
            IdentityCase::BesselDouble { .. } | IdentityCase::Kernel { .. } => 1e-6,
            _ => 1e-8,
        }
    }

    pub fn run(&self) -> Result<IdentityReport> {
        match *self {
            IdentityCase::ExponentialMellin { sign, s } => verify_exponential_mellin(sign, s),
            IdentityCase::GEta { eta, s } => verify_g_eta(eta, s),
            IdentityCase::BesselSingle { nu, s } => verify_bessel_single(nu, s),
            IdentityCase::BesselDouble { mu, nu, s } => verify_bessel_double(mu, nu, s),
            IdentityCase::Kernel { x, y, z, alpha, beta, delta } => verify_kernel_identity(x, y, z, alpha, beta, delta),
        }
    }
}

/// Parse the identity grid: one case per line, `<id> key=value …`, with
/// `#` comments. Complex values use the `a+bi` form.
pub fn parse_identity_grid(text: &str) -> Result<Vec<IdentityCase>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |m: String| Error::Parse { line: i + 1, message: m };
        let mut words = line.split_whitespace();
        let id = words.next().expect("non-empty line");
        let mut kv = std::collections::HashMap::new();
        for w in words {
            let (k, v) = w.split_once('=').ok_or_else(|| err(format!("expected key=value, got {w:?}")))?;
            kv.insert(k, v);
        }
        let get = |k: &str| kv.get(k).copied().ok_or_else(|| err(format!("{id}: missing {k}")));
        let cx = |k: &str| -> Result<Complex> {
            let v = get(k)?;
            parse_complex(v).ok_or_else(|| err(format!("{id}: bad complex {k}={v}")))
        };
        let real = |k: &str| -> Result<f64> {
            let v = get(k)?;
            v.parse().map_err(|_| err(format!("{id}: bad number {k}={v}")))
        };
        let small = |k: &str| -> Result<i64> {
            let v = get(k)?;
            v.parse().map_err(|_| err(format!("{id}: bad integer {k}={v}")))
        };
        let case = match id {
            "exponential-mellin" => IdentityCase::ExponentialMellin {
                sign: small("sign")?.signum() as i8,
                s: cx("s")?,
            },
            "g-eta" => IdentityCase::GEta {
                eta: small("eta")?.rem_euclid(2) as u8,
                s: cx("s")?,
            },
            "bessel-single" => IdentityCase::BesselSingle { nu: cx("nu")?, s: cx("s")? },
            "bessel-double" => IdentityCase::BesselDouble {
                mu: cx("mu")?,
                nu: cx("nu")?,
                s: cx("s")?,
            },
            "kernel" => IdentityCase::Kernel {
                x: real("x")?,
                y: real("y")?,
                z: real("z")?,
                alpha: cx("alpha")?,
                beta: cx("beta")?,
                delta: small("delta")?.rem_euclid(2) as u8,
            },
            other => return Err(err(format!("unknown identity {other:?}"))),
        };
        out.push(case);
    }
    Ok(out)
}

pub fn load_identity_grid(path: &Path) -> Result<Vec<IdentityCase>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_identity_grid(&text)
}

/// The grid shipped with the crate.
pub const DEFAULT_GRID: &str = include_str!("../fixtures/mellin_grid.txt");

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_mellin_examples() {
        let r = verify_exponential_mellin(1, c(0.5, 0.0)).unwrap();
        assert!(r.abs_residual <= 1e-8, "{r:?}");
        let r = verify_exponential_mellin(-1, c(0.5, 0.0)).unwrap();
        assert!(r.abs_residual <= 1e-8);
        assert!((r.rhs - r.rhs.norm() * crate::numerics::e(-0.125)).norm() < 1e-15);
        let r = verify_exponential_mellin(1, c(0.25, 0.3)).unwrap();
        assert!(r.abs_residual <= 1e-7);
        assert_eq!(r.recomputed_residual(), r.abs_residual);
        assert!(verify_exponential_mellin(1, c(1.5, 0.0)).is_err());
    }

    #[test]
    fn g_eta_examples() {
        for (eta, s, tol) in [(0, 0.5, 1e-8), (1, 0.5, 1e-8), (0, 0.9, 1e-7)] {
            let r = verify_g_eta(eta, c(s, 0.0)).unwrap();
            assert!(r.abs_residual <= tol, "{r:?}");
        }
        let r = verify_g_eta(1, c(0.5, 0.0)).unwrap();
        assert!((r.lhs - c(0.0, 1.0)).norm() < 1e-8);
    }

    #[test]
    fn bessel_single_examples() {
        let r = verify_bessel_single(c(0.0, 0.0), c(2.0, 0.0)).unwrap();
        assert!((r.rhs - 1.0).norm() < 1e-15);
        assert!(r.abs_residual <= 1e-8, "{r:?}");
        let r = verify_bessel_single(c(0.5, 0.0), c(2.0, 0.0)).unwrap();
        let want = complex_gamma(c(0.75, 0.0)).unwrap() * complex_gamma(c(1.25, 0.0)).unwrap();
        assert!((r.rhs - want).norm() < 1e-15);
        assert!(r.abs_residual <= 1e-8);
        let r = verify_bessel_single(c(0.0, 1.3), c(2.4, 0.0)).unwrap();
        assert!(r.abs_residual <= 1e-8, "{r:?}");
        assert!(verify_bessel_single(c(2.0, 0.0), c(1.5, 0.0)).is_err());
    }

    #[test]
    fn mellin_invariant_points() {
        for nu in [c(0.0, 0.0), c(0.3, 0.0), c(0.0, 1.2)] {
            for s in [c(2.0, 0.0), c(2.5, 0.0), c(3.0, 1.0)] {
                let r = verify_bessel_single(nu, s).unwrap();
                assert!(r.abs_residual <= 1e-8 * r.rhs.norm().max(1.0), "{r:?}");
            }
        }
    }

    #[test]
    fn bessel_double_examples() {
        let r = verify_bessel_double(c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)).unwrap();
        assert!((r.rhs - 0.5).norm() < 1e-15);
        assert!(r.abs_residual <= 1e-8, "{r:?}");
        let r = verify_bessel_double(c(0.0, 0.0), c(0.5, 0.0), c(2.5, 0.0)).unwrap();
        assert!(r.abs_residual <= 1e-8, "{r:?}");
        let r = verify_bessel_double(c(0.0, 0.8), c(0.0, 0.8), c(3.0, 0.0)).unwrap();
        assert!(r.abs_residual <= 1e-8, "{r:?}");
    }

    #[test]
    fn squared_bessel_self_consistency() {
        // K_ν² integrated on its own, by exp-sinh over the whole half line
        let nu = c(0.3, 0.6);
        let s = c(2.2, 0.5);
        let q = integrate_endpoint_singular(
            |n: Node| {
                if n.x < 1e-30 || n.x > 300.0 {
                    return c(0.0, 0.0);
                }
                let k = bessel_k(nu, n.x).unwrap().value;
                k * k * ((s - 1.0) * n.x.ln()).exp()
            },
            0.0,
            f64::INFINITY,
            1e-12,
        )
        .unwrap();
        let closed = bessel_double_closed_form(nu, nu, s).unwrap();
        let r = verify_bessel_double(nu, nu, s).unwrap();
        assert!((q.value - closed).norm() <= 1e-8, "{} vs {closed}", q.value);
        assert!((r.lhs - q.value).norm() <= 1e-8);
    }

    #[test]
    fn kernel_examples() {
        let a = c(0.3, 0.0);
        let r = verify_kernel_identity(0.0, 1.0, 2.0, a, a, 0).unwrap();
        assert!(r.abs_residual <= 1e-6, "{r:?}");
        let r = verify_kernel_identity(0.0, 1.0, 3.0, c(0.2, 0.0), c(0.4, 0.0), 1).unwrap();
        assert!(r.abs_residual <= 1e-6, "{r:?}");
        assert!(verify_kernel_identity(0.0, 0.0, 1.0, a, a, 0).is_err());
        assert!(verify_kernel_identity(0.0, 1.0, 2.0, c(0.8, 0.0), a, 0).is_err());
    }

    #[test]
    fn kernel_symmetry() {
        let (al, be) = (c(0.25, 0.1), c(0.35, -0.2));
        for delta in 0..2 {
            let r1 = verify_kernel_identity(-0.4, 1.3, 2.2, al, be, delta).unwrap();
            let r2 = verify_kernel_identity(1.3, -0.4, 2.2, be, al, delta).unwrap();
            assert!((r1.rhs - r2.rhs).norm() < 1e-12);
            assert!((r1.lhs - r2.lhs).norm() < 1e-8);
            assert!((r1.abs_residual - r2.abs_residual).abs() < 1e-8);
        }
    }

    #[test]
    fn shipped_grid_parses_with_enough_points() {
        let cases = parse_identity_grid(DEFAULT_GRID).unwrap();
        for id in ["exponential-mellin", "g-eta", "bessel-single", "bessel-double", "kernel"] {
            assert!(cases.iter().filter(|c| c.id() == id).count() >= 5, "{id}");
        }
        assert!(parse_identity_grid("kernel x=0\n").is_err());
        assert!(parse_identity_grid("nonsense s=1\n").is_err());
    }

    #[test]
    fn shipped_grid_within_tolerance() {
        for case in parse_identity_grid(DEFAULT_GRID).unwrap() {
            let r = case.run().unwrap_or_else(|e| panic!("{case:?}: {e}"));
            assert!(r.abs_residual <= case.tolerance(), "{}: {}", r.describe(), r.abs_residual);
        }
    }
}

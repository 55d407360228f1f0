//! Archimedean Gamma factors: G_η, Γ_R, Γ_C, the L∞ products of
//! Rankin–Selberg pairs, and the products Φ(s) appearing in the
//! functional equations, kept as atom lists so poles stay attributable.

use std::fmt;

use serde::Serialize;

use crate::coefficients::SpectralData;
use crate::error::{Error, Result};
use crate::numerics::{c, check_finite, complex_gamma, rgamma, Complex, PI};

fn is_pole(z: Complex, step: f64, offset: f64) -> bool {
    // z ∈ {offset, offset − step, offset − 2·step, …}
    if z.im != 0.0 || z.re > offset {
        return false;
    }
    let k = (offset - z.re) / step;
    k.fract() == 0.0
}

/// Γ_R(s) = π^{−s/2} Γ(s/2).
pub fn gamma_r(s: Complex) -> Result<Complex> {
    check_finite(s, "Gamma_R")?;
    if is_pole(s, 2.0, 0.0) {
        return Err(Error::Pole { function: "Gamma_R", at: s });
    }
    Ok((-s / 2.0 * PI.ln()).exp() * complex_gamma(s / 2.0)?)
}

/// Γ_C(s) = 2 (2π)^{−s} Γ(s).
pub fn gamma_c(s: Complex) -> Result<Complex> {
    check_finite(s, "Gamma_C")?;
    if is_pole(s, 1.0, 0.0) {
        return Err(Error::Pole { function: "Gamma_C", at: s });
    }
    Ok(2.0 * (-s * (2.0 * PI).ln()).exp() * complex_gamma(s)?)
}

// 1/Γ_R(s), entire
fn rgamma_r(s: Complex) -> Complex {
    (s / 2.0 * PI.ln()).exp() * rgamma(s / 2.0)
}

/// G_η(s) = ∫_ℝ e(x) (sgn x)^η |x|^{s−1} dx, continued:
/// G_0(s) = 2Γ(s)(2π)^{−s} cos(πs/2) = Γ_R(s)/Γ_R(1−s) and
/// G_1(s) = 2iΓ(s)(2π)^{−s} sin(πs/2) = iΓ_R(s+1)/Γ_R(2−s).
/// Only η mod 2 matters. Poles: s ∈ {0, −2, …} for η = 0 and
/// s ∈ {−1, −3, …} for η = 1; the remaining poles of Γ(s) are cancelled
/// by zeros of the trigonometric factor.
pub fn g_eta(eta: u8, s: Complex) -> Result<Complex> {
    check_finite(s, "G_eta")?;
    if eta % 2 == 0 {
        if is_pole(s, 2.0, 0.0) {
            return Err(Error::Pole { function: "G_0", at: s });
        }
        Ok(gamma_r(s)? * rgamma_r(1.0 - s))
    } else {
        if is_pole(s, 2.0, -1.0) {
            return Err(Error::Pole { function: "G_1", at: s });
        }
        Ok(c(0.0, 1.0) * gamma_r(s + 1.0)? * rgamma_r(2.0 - s))
    }
}

/// i^k for k mod 4, an exact sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FourthRoot(pub u8);

impl FourthRoot {
    pub const ONE: FourthRoot = FourthRoot(0);

    pub fn minus_one_pow(k: u32) -> FourthRoot {
        FourthRoot(((k % 2) * 2) as u8)
    }

    pub fn value(self) -> Complex {
        match self.0 % 4 {
            0 => c(1.0, 0.0),
            1 => c(0.0, 1.0),
            2 => c(-1.0, 0.0),
            _ => c(0.0, -1.0),
        }
    }

    pub fn mul(self, other: FourthRoot) -> FourthRoot {
        FourthRoot((self.0 + other.0) % 4)
    }

    pub fn inverse(self) -> FourthRoot {
        FourthRoot((4 - self.0 % 4) % 4)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum AtomKind {
    GEta(u8),
    GammaR,
    GammaC,
    Const(Complex),
}

/// `kind(scale·s + shift)^power`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Atom {
    pub kind: AtomKind,
    pub shift: Complex,
    pub scale: i8,
    pub power: i8,
}

impl Atom {
    pub fn new(kind: AtomKind, scale: i8, shift: Complex) -> Atom {
        Atom { kind, shift, scale, power: 1 }
    }

    pub fn argument(&self, s: Complex) -> Complex {
        s * self.scale as f64 + self.shift
    }

    pub fn eval(&self, s: Complex) -> Result<Complex> {
        let z = self.argument(s);
        let v = match self.kind {
            AtomKind::GEta(eta) => g_eta(eta, z),
            AtomKind::GammaR => gamma_r(z),
            AtomKind::GammaC => gamma_c(z),
            AtomKind::Const(v) => Ok(v),
        };
        let v = v.map_err(|e| match e {
            Error::Pole { .. } => Error::FactorPole {
                factor: self.to_string(),
                at: z,
            },
            other => other,
        })?;
        Ok(v.powi(self.power as i32))
    }
}

fn fmt_shift(shift: Complex) -> String {
    if shift == c(0.0, 0.0) {
        return String::new();
    }
    let mut out = String::new();
    if shift.re != 0.0 {
        out.push_str(&format!("{:+}", shift.re));
    }
    if shift.im != 0.0 {
        out.push_str(&format!("{:+}i", shift.im));
    }
    out
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = if self.scale < 0 { "-s" } else { "s" };
        let arg = format!("{var}{}", fmt_shift(self.shift));
        match self.kind {
            AtomKind::GEta(eta) => write!(f, "G_{}({arg})", eta % 2)?,
            AtomKind::GammaR => write!(f, "Γ_R({arg})")?,
            AtomKind::GammaC => write!(f, "Γ_C({arg})")?,
            AtomKind::Const(v) => write!(f, "({v})")?,
        }
        if self.power != 1 {
            write!(f, "^{}", self.power)?;
        }
        Ok(())
    }
}

/// Product of atoms times an exact fourth root of unity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaFactorExpr {
    pub atoms: Vec<Atom>,
    pub sign: FourthRoot,
}

impl GammaFactorExpr {
    pub fn new(atoms: Vec<Atom>) -> Self {
        GammaFactorExpr {
            atoms,
            sign: FourthRoot::ONE,
        }
    }

    pub fn eval(&self, s: Complex) -> Result<Complex> {
        self.atoms
            .iter()
            .try_fold(self.sign.value(), |acc, a| Ok(acc * a.eval(s)?))
    }

    /// The expression at `1 − s`.
    pub fn reflect(&self) -> GammaFactorExpr {
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom {
                scale: -a.scale,
                shift: a.shift + a.scale as f64,
                ..*a
            })
            .collect();
        GammaFactorExpr { atoms, sign: self.sign }
    }

    pub fn inverse(&self) -> GammaFactorExpr {
        let atoms = self.atoms.iter().map(|a| Atom { power: -a.power, ..*a }).collect();
        GammaFactorExpr {
            atoms,
            sign: self.sign.inverse(),
        }
    }

    pub fn times(&self, other: &GammaFactorExpr) -> GammaFactorExpr {
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().copied());
        GammaFactorExpr {
            atoms,
            sign: self.sign.mul(other.sign),
        }
    }
}

impl fmt::Display for GammaFactorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign.0 % 4 {
            1 => write!(f, "i·")?,
            2 => write!(f, "-")?,
            3 => write!(f, "-i·")?,
            _ => {}
        }
        if self.atoms.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.atoms.iter().map(|a| a.to_string()).collect();
        write!(f, "{}", parts.join("·"))
    }
}

/// The (λ, δ) pair used in the G-factor products: a Maass form gives its
/// own (λ, η); a holomorphic form of weight k gives λ = 1 − k, δ = k mod 2.
pub fn lambda_delta(spec: &SpectralData) -> Result<(Complex, u8)> {
    match spec {
        SpectralData::Holomorphic { weight } => Ok((c(1.0 - *weight as f64, 0.0), (weight % 2) as u8)),
        SpectralData::Maass { lambda, parity } => Ok((*lambda, *parity)),
        SpectralData::Gl4 { .. } => Err(Error::domain("GL(4) data has no GL(2) parameter")),
    }
}

/// Archimedean factor L∞(s) of the Rankin–Selberg pair: four Γ_R for two
/// Maass forms, two Γ_C for a Maass and a holomorphic form, and
/// Γ_C(s + (k₁+k₂)/2 − 1) Γ_C(s + |k₁−k₂|/2) for two holomorphic forms.
pub fn linfty_product(spec1: &SpectralData, spec2: &SpectralData) -> Result<GammaFactorExpr> {
    use SpectralData::*;
    let atoms = match (spec1, spec2) {
        (Maass { lambda: l1, parity: d1 }, Maass { lambda: l2, parity: d2 }) => {
            let eta = ((d1 + d2) % 2) as f64;
            let mut v = Vec::with_capacity(4);
            for e1 in [1.0, -1.0] {
                for e2 in [1.0, -1.0] {
                    v.push(Atom::new(AtomKind::GammaR, 1, e1 * l1 / 2.0 + e2 * l2 / 2.0 + eta));
                }
            }
            v
        }
        (Maass { lambda, .. }, Holomorphic { weight }) | (Holomorphic { weight }, Maass { lambda, .. }) => {
            let base = (*weight as f64 - 1.0) / 2.0;
            vec![
                Atom::new(AtomKind::GammaC, 1, lambda / 2.0 + base),
                Atom::new(AtomKind::GammaC, 1, -lambda / 2.0 + base),
            ]
        }
        (Holomorphic { weight: k1 }, Holomorphic { weight: k2 }) => {
            let (k1, k2) = (*k1 as f64, *k2 as f64);
            vec![
                Atom::new(AtomKind::GammaC, 1, c((k1 + k2) / 2.0 - 1.0, 0.0)),
                Atom::new(AtomKind::GammaC, 1, c((k1 - k2).abs() / 2.0, 0.0)),
            ]
        }
        _ => return Err(Error::domain("L∞ product needs two GL(2) spectral data")),
    };
    Ok(GammaFactorExpr::new(atoms))
}

/// Φ(s) = Π_{ε₁,ε₂ = ±1} G_{δ₁+δ₂}(s + ε₁λ₁/2 + ε₂λ₂/2) as an expression.
pub fn prop1_expr(l1: Complex, l2: Complex, d1: u8, d2: u8) -> GammaFactorExpr {
    let eta = (d1 + d2) % 2;
    let mut atoms = Vec::with_capacity(4);
    for e1 in [1.0, -1.0] {
        for e2 in [1.0, -1.0] {
            atoms.push(Atom::new(AtomKind::GEta(eta), 1, e1 * l1 / 2.0 + e2 * l2 / 2.0));
        }
    }
    GammaFactorExpr::new(atoms)
}

/// The functional-equation factor of a Rankin–Selberg pair,
/// L(1 − s) = Φ(s) L(s).
pub fn prop1_ratio(s: Complex, l1: Complex, l2: Complex, d1: u8, d2: u8) -> Result<Complex> {
    prop1_expr(l1, l2, d1, d2).eval(s)
}

/// Φ(s) for a pair of GL(2) spectral data.
pub fn prop1_for(spec1: &SpectralData, spec2: &SpectralData) -> Result<GammaFactorExpr> {
    let (l1, d1) = lambda_delta(spec1)?;
    let (l2, d2) = lambda_delta(spec2)?;
    Ok(prop1_expr(l1, l2, d1, d2))
}

fn check_gl4(mu: &[Complex; 4], eta: &[u8; 4]) -> Result<()> {
    SpectralData::gl4(*mu, *eta).map(|_| ())
}

/// Π_{i<j} G_{η_i+η_j}(s − μ_i − μ_j) as an expression.
pub fn prop2_expr(mu: &[Complex; 4], eta: &[u8; 4]) -> Result<GammaFactorExpr> {
    check_gl4(mu, eta)?;
    let mut atoms = Vec::with_capacity(6);
    for i in 0..4 {
        for j in (i + 1)..4 {
            atoms.push(Atom::new(AtomKind::GEta((eta[i] + eta[j]) % 2), 1, -(mu[i] + mu[j])));
        }
    }
    Ok(GammaFactorExpr::new(atoms))
}

/// The six-factor exterior-square functional-equation product. Requires
/// Σμ = 0 and Ση ≡ 0 mod 2.
pub fn prop2_ratio(s: Complex, mu: &[Complex; 4], eta: &[u8; 4]) -> Result<Complex> {
    prop2_expr(mu, eta)?.eval(s)
}

/// 2(−1)^{η₂} G_{η₁+η₂}(s − μ₁ − μ₂) G_{η₁+η₃}(s − μ₁ − μ₃).
pub fn lemma1_gamma_product(s: Complex, mu: &[Complex; 4], eta: &[u8; 4]) -> Result<Complex> {
    check_gl4(mu, eta)?;
    let mut e = GammaFactorExpr::new(vec![
        Atom::new(AtomKind::Const(c(2.0, 0.0)), 1, c(0.0, 0.0)),
        Atom::new(AtomKind::GEta((eta[0] + eta[1]) % 2), 1, -(mu[0] + mu[1])),
        Atom::new(AtomKind::GEta((eta[0] + eta[2]) % 2), 1, -(mu[0] + mu[2])),
    ]);
    e.sign = FourthRoot::minus_one_pow(eta[1] as u32);
    e.eval(s)
}

/// Both sides of the consistency identity tying the pairing's Gamma
/// product to the exterior-square factor:
///
/// lemma1(s) = (−1)^{η₂+η₃} G_{η₁+η₄}(1−s−μ₂−μ₃) G_{η₂+η₃}(1−s−μ₁−μ₄)
///             · lemma1(1−s) · prop2(s).
///
/// Returns (lhs, rhs).
pub fn prop2_consistency(s: Complex, mu: &[Complex; 4], eta: &[u8; 4]) -> Result<(Complex, Complex)> {
    let lhs = lemma1_gamma_product(s, mu, eta)?;
    let t = 1.0 - s;
    let sign = FourthRoot::minus_one_pow((eta[1] + eta[2]) as u32).value();
    let rhs = sign
        * g_eta(eta[0] + eta[3], t - mu[1] - mu[2])?
        * g_eta(eta[1] + eta[2], t - mu[0] - mu[3])?
        * lemma1_gamma_product(t, mu, eta)?
        * prop2_ratio(s, mu, eta)?;
    Ok((lhs, rhs))
}

/// L∞(s) / (L∞(1−s) Φ(s)) for a GL(2) pair: the sign in the completed
/// functional equation, observed numerically at `s`.
pub fn linfty_fe_sign(spec1: &SpectralData, spec2: &SpectralData, s: Complex) -> Result<Complex> {
    let l = linfty_product(spec1, spec2)?;
    let phi = prop1_for(spec1, spec2)?;
    Ok(l.eval(s)? / (l.reflect().eval(s)? * phi.eval(s)?))
}

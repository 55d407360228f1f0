//! Special functions and quadrature in binary64.
//!
//! Everything downstream goes through this layer: complex Γ, incomplete Γ,
//! `K_ν` for complex order, Riemann and Hurwitz ζ, adaptive and
//! double-exponential quadrature, and the conditionally convergent
//! oscillatory Mellin integral.

mod bessel;
mod gamma;
mod mellin;
mod quadrature;
mod zeta;

pub use bessel::{bessel_k, bessel_k_scaled};
pub use gamma::{
    complex_gamma, ln_gamma, lower_incomplete_gamma_series, rgamma, upper_incomplete_gamma,
};
pub use mellin::integrate_oscillatory_mellin;
pub use quadrature::{
    gauss_legendre, integrate_adaptive, integrate_endpoint_singular, Node, QuadratureResult,
};
pub use zeta::{hurwitz_zeta, riemann_zeta, zeta_euler_maclaurin};

use crate::error::{Error, Result};

/// Working complex type.
pub type Complex = num_complex::Complex64;

pub(crate) const PI: f64 = std::f64::consts::PI;
pub(crate) const TAU: f64 = std::f64::consts::TAU;

/// A value together with an underflow flag. When `underflow` is set the
/// true value is below the smallest representable magnitude and `value` is 0.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Flagged<T> {
    pub value: T,
    pub underflow: bool,
}

impl<T> Flagged<T> {
    pub fn exact(value: T) -> Self {
        Flagged {
            value,
            underflow: false,
        }
    }
}

/// A numeric result with its error estimate and diagnostics.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct EvalReport {
    pub value: Complex,
    pub error_estimate: f64,
    /// Series terms used, where applicable.
    pub terms: usize,
    pub quadrature: Option<QuadratureResult>,
    pub flags: Vec<String>,
}

#[inline]
pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

/// `e(x) = exp(2πix)` for real `x`.
#[inline]
pub fn e(x: f64) -> Complex {
    let r = x - x.round();
    Complex::from_polar(1.0, TAU * r)
}

/// `e(z) = exp(2πiz)` for complex `z`.
pub fn e_complex(z: Complex) -> Complex {
    let r = z.re - z.re.round();
    Complex::from_polar((-TAU * z.im).exp(), TAU * r)
}

fn sin_pi_real(x: f64) -> f64 {
    // reduce to [-1, 1] so integers give exact zeros
    let r = x - 2.0 * (x / 2.0).round();
    if r == 0.0 || r.abs() == 1.0 {
        return 0.0;
    }
    if r.abs() == 0.5 {
        return r.signum();
    }
    (PI * r).sin()
}

fn cos_pi_real(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    if r.abs() == 0.5 {
        return 0.0;
    }
    if r == 0.0 {
        return 1.0;
    }
    if r.abs() == 1.0 {
        return -1.0;
    }
    (PI * r).cos()
}

/// `sin(πz)` with exact zeros at the integers.
pub fn sin_pi(z: Complex) -> Complex {
    let y = PI * z.im;
    c(sin_pi_real(z.re) * y.cosh(), cos_pi_real(z.re) * y.sinh())
}

/// `cos(πz)` with exact zeros at the half-integers.
pub fn cos_pi(z: Complex) -> Complex {
    let y = PI * z.im;
    c(cos_pi_real(z.re) * y.cosh(), -sin_pi_real(z.re) * y.sinh())
}

/// True when `z` is exactly a non-positive integer.
pub fn is_nonpositive_integer(z: Complex) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

pub(crate) fn check_finite(z: Complex, what: &str) -> Result<Complex> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::domain(format!("{what}: non-finite value {z}")))
    }
}

/// Parse `a`, `a+bi`, `a-bi`, `bi`, `i`. Whitespace is ignored.
pub fn parse_complex(text: &str) -> Option<Complex> {
    let t: String = text.chars().filter(|ch| !ch.is_whitespace()).collect();
    if t.is_empty() {
        return None;
    }
    if let Some(body) = t.strip_suffix(['i', 'j']) {
        // find the split between real and imaginary parts
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                split = Some(k);
                break;
            }
        }
        let (re, im) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => 1.0,
            "-" => -1.0,
            v => v.parse::<f64>().ok()?,
        };
        let re = re.parse::<f64>().ok()?;
        Some(c(re, im))
    } else {
        t.parse::<f64>().ok().map(|v| c(v, 0.0))
    }
}

/// Render a complex number in the form accepted by [`parse_complex`].
pub fn format_complex(z: Complex) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 || (z.im == 0.0 && z.im.is_sign_negative()) {
        format!("{}{}i", z.re, z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trig_pi_exact_at_lattice_points() {
        assert_eq!(sin_pi(c(3.0, 0.0)), c(0.0, 0.0));
        assert_eq!(cos_pi(c(2.5, 0.0)).re, 0.0);
        assert_eq!(sin_pi(c(-0.5, 0.0)).re, -1.0);
        let z = c(0.3, 0.7);
        assert!((sin_pi(z) - (z * PI).sin()).norm() < 1e-14);
        assert!((cos_pi(z) - (z * PI).cos()).norm() < 1e-14);
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("6+3i"), Some(c(6.0, 3.0)));
        assert_eq!(parse_complex("0.5-2i"), Some(c(0.5, -2.0)));
        assert_eq!(parse_complex("1.2i"), Some(c(0.0, 1.2)));
        assert_eq!(parse_complex("-i"), Some(c(0.0, -1.0)));
        assert_eq!(parse_complex("2"), Some(c(2.0, 0.0)));
        assert_eq!(parse_complex("1e-3+2e+1i"), Some(c(1e-3, 20.0)));
        assert_eq!(parse_complex("abc"), None);
        for z in [c(1.5, -0.25), c(0.0, 3.0), c(-2.0, 0.0)] {
            assert_eq!(parse_complex(&format_complex(z)), Some(z));
        }
    }

    #[test]
    fn e_is_periodic() {
        assert!((e(0.25) - c(0.0, 1.0)).norm() < 1e-15);
        assert!((e(1000.125) - e(0.125)).norm() < 1e-12);
    }
}

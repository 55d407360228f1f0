use super::{c, check_finite, Complex, Flagged, PI};
use crate::error::{Error, Result};

// ln(1e18): samples below peak·1e−18 are dropped
const LOG_CUTOFF: f64 = 41.5;
const MAX_LEVELS: usize = 14;

/// `e^y K_ν(y)` for complex order and real `y > 0`.
///
/// Uses K_ν(y) = ½∫_ℝ exp(−y cosh τ + ντ) dτ on the horizontal line through
/// the saddle point of the exponent. The integrand decays double
/// exponentially, so the trapezoidal rule converges geometrically; the step
/// is halved until successive sums agree.
pub fn bessel_k_scaled(nu: Complex, y: f64) -> Result<Complex> {
    check_finite(nu, "bessel_k")?;
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::domain(format!("bessel_k needs y > 0, got {y}")));
    }
    let (a, b) = (nu.re, nu.im);

    // contour height: imaginary part of the saddle asinh(ν/y), kept a
    // distance eps from ±π/2 where the integrand stops decaying
    let saddle = (nu / y).asinh();
    let eps = if b.abs() > 0.0 { (3.0 / b.abs()).min(PI / 2.0) } else { PI / 2.0 };
    let limit = (PI / 2.0 - eps).max(0.0);
    let theta = saddle.im.clamp(-limit, limit);
    let (sin_t, cos_t) = theta.sin_cos();

    let log_mod = |t: f64| -y * (t.cosh() * cos_t - 1.0) + a * t - b * theta;
    let t0 = (a / (y * cos_t)).asinh();
    let peak = log_mod(t0);
    let edge = |dir: f64| -> f64 {
        let mut step = 1.0;
        while log_mod(t0 + dir * step) > peak - LOG_CUTOFF {
            step *= 2.0;
        }
        let (mut lo, mut hi) = (0.0, step);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if log_mod(t0 + dir * mid) > peak - LOG_CUTOFF {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        hi
    };
    let right = edge(1.0);
    let left = edge(-1.0);

    let phase0 = c(0.0, theta) * nu;
    let f = |t: f64| -> Complex {
        let (sh, ch) = (t.sinh(), t.cosh());
        let expo = c(-y * (ch * cos_t - 1.0), -y * sh * sin_t) + nu * t + phase0;
        expo.exp()
    };

    let mut h = 0.5;
    let mut sum = f(t0);
    let mut abs_sum = sum.norm();
    let mut k = 1;
    while (k as f64) * h <= right {
        let v = f(t0 + k as f64 * h);
        abs_sum += v.norm();
        sum += v;
        k += 1;
    }
    k = 1;
    while (k as f64) * h <= left {
        let v = f(t0 - k as f64 * h);
        abs_sum += v.norm();
        sum += v;
        k += 1;
    }
    let mut prev = sum * h;
    for _ in 0..MAX_LEVELS {
        h *= 0.5;
        // new nodes are the odd multiples of the halved step
        let mut k = 1;
        while (k as f64) * h <= right {
            let v = f(t0 + k as f64 * h);
            abs_sum += v.norm();
            sum += v;
            k += 2;
        }
        k = 1;
        while (k as f64) * h <= left {
            let v = f(t0 - k as f64 * h);
            abs_sum += v.norm();
            sum += v;
            k += 2;
        }
        let cur = sum * h;
        let diff = (cur - prev).norm();
        if diff <= 1e-14 * cur.norm() || diff <= 1e-15 * abs_sum * h {
            return Ok(0.5 * cur);
        }
        prev = cur;
    }
    Err(Error::NonConvergence {
        what: "bessel_k trapezoidal rule",
        estimate: 0.5 * prev,
    })
}

/// K_ν(y) for complex order `ν` and real `y > 0`. The flag is set when the
/// value underflows binary64.
pub fn bessel_k(nu: Complex, y: f64) -> Result<Flagged<Complex>> {
    if y > 700.0 + nu.re.abs() * (1.0 + y.ln().abs()) {
        // e^{−y} alone is far below the smallest normal number
        if y.is_finite() {
            check_finite(nu, "bessel_k")?;
            return Ok(Flagged {
                value: c(0.0, 0.0),
                underflow: true,
            });
        }
    }
    let scaled = bessel_k_scaled(nu, y)?;
    let log = scaled.norm().ln() - y;
    if log < -708.0 {
        return Ok(Flagged {
            value: c(0.0, 0.0),
            underflow: true,
        });
    }
    Ok(Flagged::exact(scaled * (-y).exp()))
}

use std::collections::BinaryHeap;

use super::{c, Complex, PI};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct QuadratureResult {
    pub value: Complex,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

impl QuadratureResult {
    pub fn zero() -> Self {
        QuadratureResult {
            value: c(0.0, 0.0),
            abs_error_estimate: 0.0,
            evaluations: 0,
        }
    }

    /// Sum of two independent pieces.
    pub fn combine(self, other: QuadratureResult) -> QuadratureResult {
        QuadratureResult {
            value: self.value + other.value,
            abs_error_estimate: self.abs_error_estimate + other.abs_error_estimate,
            evaluations: self.evaluations + other.evaluations,
        }
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct Segment {
    a: f64,
    b: f64,
    value: Complex,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: Fn(f64) -> Complex>(f: &F, a: f64, b: f64) -> Result<Segment> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    let mut fv1 = [c(0.0, 0.0); 7];
    let mut fv2 = [c(0.0, 0.0); 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += (f1 + f2) * WGK[j];
        if j % 2 == 1 {
            resg += (f1 + f2) * WG[j / 2];
        }
    }
    let mean = resk * 0.5;
    let mut resasc = WGK[7] * (fc - mean).norm();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).norm() + (fv2[j] - mean).norm());
    }
    let resasc = resasc * half.abs();
    let value = resk * half;
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::domain(format!(
            "integrand not finite on [{a}, {b}]"
        )));
    }
    let mut error = ((resk - resg) * half).norm();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    // roundoff floor
    let resabs: f64 = half.abs()
        * (WGK[7] * fc.norm()
            + (0..7)
                .map(|j| WGK[j] * (fv1[j].norm() + fv2[j].norm()))
                .sum::<f64>());
    error = error.max(50.0 * f64::EPSILON * resabs);
    Ok(Segment { a, b, value, error })
}

const MAX_SEGMENTS: usize = 4000;

fn adaptive_finite<F: Fn(f64) -> Complex>(f: &F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult> {
    let first = kronrod15(f, a, b)?;
    let mut evaluations = 15;
    let mut total = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    loop {
        let target = tol.max(tol * total.norm());
        if error <= target {
            break;
        }
        if heap.len() >= MAX_SEGMENTS {
            return Err(Error::Quadrature(QuadratureResult {
                value: total,
                abs_error_estimate: error,
                evaluations,
            }));
        }
        let worst = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.a + worst.b);
        if worst.b - worst.a < 1e-200 * (b - a) || mid <= worst.a || mid >= worst.b {
            // interval exhausted at machine resolution
            heap.push(worst);
            return Err(Error::Quadrature(QuadratureResult {
                value: total,
                abs_error_estimate: error,
                evaluations,
            }));
        }
        let left = kronrod15(f, worst.a, mid)?;
        let right = kronrod15(f, mid, worst.b)?;
        evaluations += 30;
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // re-add in a fixed order so the result does not depend on heap layout
    let mut segs: Vec<Segment> = heap.into_vec();
    segs.sort_by(|p, q| p.a.total_cmp(&q.a));
    let value = segs.iter().fold(c(0.0, 0.0), |acc, s| acc + s.value);
    let error = segs.iter().map(|s| s.error).sum();
    Ok(QuadratureResult {
        value,
        abs_error_estimate: error,
        evaluations,
    })
}

/// Globally adaptive 15-point Gauss–Kronrod quadrature of a complex-valued
/// integrand on `[a, b]`. Infinite limits are mapped to finite ones.
/// Integrable endpoint singularities are resolved by bisection since the
/// rule never samples the endpoints.
pub fn integrate_adaptive<F: Fn(f64) -> Complex>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult> {
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    if a.is_nan() || b.is_nan() {
        return Err(Error::domain("NaN integration limit"));
    }
    if a == b {
        return Ok(QuadratureResult {
            value: c(0.0, 0.0),
            abs_error_estimate: 0.0,
            evaluations: 1,
        });
    }
    if a > b {
        let r = integrate_adaptive(f, b, a, tol)?;
        return Ok(QuadratureResult { value: -r.value, ..r });
    }
    match (a.is_finite(), b.is_finite()) {
        (true, true) => adaptive_finite(&f, a, b, tol),
        (true, false) => {
            let g = |t: f64| {
                let d = 1.0 - t;
                f(a + t / d) / (d * d)
            };
            adaptive_finite(&g, 0.0, 1.0, tol)
        }
        (false, true) => {
            let g = |t: f64| {
                let d = 1.0 - t;
                f(b - t / d) / (d * d)
            };
            adaptive_finite(&g, 0.0, 1.0, tol)
        }
        (false, false) => {
            let g = |t: f64| {
                let d = 1.0 - t * t;
                f(t / d) * ((1.0 + t * t) / (d * d))
            };
            adaptive_finite(&g, -1.0, 1.0, tol)
        }
    }
}

/// Abscissa handed to endpoint-singular integrands, with the distances to
/// both endpoints computed without cancellation.
#[derive(Debug, Clone, Copy)]
pub struct Node {
    pub x: f64,
    pub from_a: f64,
    pub to_b: f64,
}

const DE_MAX_LEVEL: usize = 10;

/// Double-exponential quadrature for integrands with integrable
/// singularities at one or both endpoints: tanh-sinh on finite intervals,
/// exp-sinh when `b = +∞`.
pub fn integrate_endpoint_singular<F: Fn(Node) -> Complex>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    if !a.is_finite() || b.is_nan() || b <= a {
        return Err(Error::domain(format!("need finite a < b, got [{a}, {b}]")));
    }
    let finite = b.is_finite();
    let t_max: f64 = if finite { 6.0 } else { 6.5 };
    let len = b - a;

    // weight and node at parameter t, or None when the node is unusable
    let node = |t: f64| -> Option<(f64, Node)> {
        let u = PI / 2.0 * t.sinh();
        let du = PI / 2.0 * t.cosh();
        if finite {
            let from_a = len / (1.0 + (-2.0 * u).exp());
            let to_b = len / (1.0 + (2.0 * u).exp());
            if !(from_a > 0.0 && to_b > 0.0) {
                return None;
            }
            let x = if from_a < to_b { a + from_a } else { b - to_b };
            let ch = u.cosh();
            let w = 0.5 * len * du / (ch * ch);
            (w > 0.0 && w.is_finite()).then_some((w, Node { x, from_a, to_b }))
        } else {
            let from_a = u.exp();
            if !(from_a > 0.0 && from_a.is_finite()) {
                return None;
            }
            let w = du * from_a;
            Some((
                w,
                Node {
                    x: a + from_a,
                    from_a,
                    to_b: f64::INFINITY,
                },
            ))
        }
    };

    let mut evaluations = 0usize;
    let mut eval = |t: f64| -> Result<Complex> {
        match node(t) {
            None => Ok(c(0.0, 0.0)),
            Some((w, n)) => {
                evaluations += 1;
                let v = f(n);
                if v == c(0.0, 0.0) {
                    return Ok(v);
                }
                let r = v * w;
                if r.re.is_finite() && r.im.is_finite() {
                    Ok(r)
                } else {
                    Err(Error::domain(format!("integrand not finite at x = {}", n.x)))
                }
            }
        }
    };

    let mut h = 1.0;
    let mut sum = eval(0.0)?;
    let mut k = 1;
    while k as f64 * h <= t_max {
        sum += eval(k as f64 * h)? + eval(-(k as f64) * h)?;
        k += 1;
    }
    let mut prev = sum * h;
    let mut last_err = f64::INFINITY;
    for level in 1..=DE_MAX_LEVEL {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= t_max {
            sum += eval(k as f64 * h)? + eval(-(k as f64) * h)?;
            k += 2;
        }
        let cur = sum * h;
        let err = (cur - prev).norm();
        let target = tol.max(tol * cur.norm());
        if level >= 3 && err <= target {
            return Ok(QuadratureResult {
                value: cur,
                abs_error_estimate: err,
                evaluations,
            });
        }
        prev = cur;
        last_err = err;
    }
    Err(Error::Quadrature(QuadratureResult {
        value: prev,
        abs_error_estimate: last_err,
        evaluations,
    }))
}

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j + 1) as f64 * z * p2 - j as f64 * p3) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

use super::{c, e, integrate_adaptive, integrate_endpoint_singular, Complex, Node, QuadratureResult};
use crate::error::{Error, Result};

/// ∫_0^∞ e(cx) x^{s−1} dx for real `c ≠ 0` and `0 < Re s < 1`.
///
/// The half line is cut into half-period cells, so consecutive cells
/// alternate in sign. Partial sums over whole cells are then averaged
/// repeatedly (an Euler transform of the cell series); the number of cells
/// and averaging depth grow until two depths agree within `tol`.
pub fn integrate_oscillatory_mellin(freq: f64, s: Complex, tol: f64) -> Result<QuadratureResult> {
    if freq == 0.0 || !freq.is_finite() {
        return Err(Error::domain(format!("phase frequency must be finite and nonzero, got {freq}")));
    }
    if !(s.re > 0.0 && s.re < 1.0) || !s.im.is_finite() {
        return Err(Error::domain(format!(
            "oscillatory Mellin integral needs 0 < Re s < 1, got {s}"
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    let half = 0.5 / freq.abs();
    let cell_tol = tol * 1e-3;

    let first = integrate_endpoint_singular(
        |n: Node| e(freq * n.x) * ((s - 1.0) * n.from_a.ln()).exp(),
        0.0,
        half,
        cell_tol,
    )?;
    let mut evaluations = first.evaluations;
    let mut cells = vec![first.value];
    let mut cell_err = first.abs_error_estimate;

    let cell = |j: usize| {
        let j = j as f64;
        integrate_adaptive(
            |x: f64| e(freq * x) * ((s - 1.0) * x.ln()).exp(),
            j * half,
            (j + 1.0) * half,
            cell_tol,
        )
    };

    let mut n0 = 8usize;
    let mut depth = 12usize;
    let mut last = None;
    for _ in 0..12 {
        while cells.len() < n0 + depth + 1 {
            let r = cell(cells.len())?;
            evaluations += r.evaluations;
            cell_err += r.abs_error_estimate;
            cells.push(r.value);
        }
        let partial: Vec<Complex> = cells
            .iter()
            .scan(c(0.0, 0.0), |acc, v| {
                *acc += *v;
                Some(*acc)
            })
            .collect();
        // partial[k] is the sum of the first k+1 cells
        let mut row: Vec<Complex> = partial[n0..=n0 + depth].to_vec();
        let mut previous_level = row.clone();
        while row.len() > 1 {
            previous_level = row.clone();
            row = row.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        }
        let value = row[0];
        let spread = (previous_level[0] - previous_level[1]).norm();
        let estimate = spread + cell_err;
        if estimate <= tol {
            return Ok(QuadratureResult {
                value,
                abs_error_estimate: estimate,
                evaluations,
            });
        }
        last = Some(QuadratureResult {
            value,
            abs_error_estimate: estimate,
            evaluations,
        });
        n0 += 8;
        depth += 4;
    }
    Err(Error::Quadrature(last.expect("at least one round")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{complex_gamma, e_complex, TAU};

    fn closed_form(freq: f64, s: Complex) -> Complex {
        (-s * (TAU * freq.abs()).ln()).exp()
            * complex_gamma(s).unwrap()
            * e_complex(freq.signum() * s / 4.0)
    }

    #[test]
    fn half_order() {
        for freq in [1.0, -1.0] {
            let r = integrate_oscillatory_mellin(freq, c(0.5, 0.0), 1e-10).unwrap();
            let want = closed_form(freq, c(0.5, 0.0));
            assert!((r.value - want).norm() < 1e-9, "{freq}: {} vs {want}", r.value);
        }
        // the two signs are conjugate phases of the same modulus
        let want = closed_form(1.0, c(0.5, 0.0));
        assert!((want - (TAU).powf(-0.5) * 1.772_453_850_905_516 * e(0.125)).norm() < 1e-15);
    }

    #[test]
    fn complex_order_and_frequency() {
        for &(freq, re, im) in &[(1.0, 0.3, 0.2), (2.5, 0.25, 0.3), (-0.7, 0.9, -0.4), (1.0, 0.08, 0.0)] {
            let s = c(re, im);
            let r = integrate_oscillatory_mellin(freq, s, 1e-10).unwrap();
            let want = closed_form(freq, s);
            assert!((r.value - want).norm() < 1e-8, "{freq} {s}: {} vs {want}", r.value);
        }
    }

    #[test]
    fn outside_strip_is_rejected() {
        assert!(matches!(integrate_oscillatory_mellin(1.0, c(1.2, 0.0), 1e-8), Err(Error::Domain(_))));
        assert!(matches!(integrate_oscillatory_mellin(1.0, c(0.0, 1.0), 1e-8), Err(Error::Domain(_))));
        assert!(matches!(integrate_oscillatory_mellin(0.0, c(0.5, 0.0), 1e-8), Err(Error::Domain(_))));
    }
}

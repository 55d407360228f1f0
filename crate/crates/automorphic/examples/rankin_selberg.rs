//! Rankin–Selberg for Δ × Δ: the fundamental-domain integral against the
//! Dirichlet series, and the continued L-function's functional equation.

use automorphic::coefficients::delta_coefficients;
use automorphic::eisenstein::{rankin_selberg_integral, unfolding_prefactor};
use automorphic::lseries::{fe_residual, rankin_selberg_l, rankin_selberg_series, FEKind, LSeriesSpec};
use automorphic::numerics::c;

fn main() -> automorphic::Result<()> {
    let short = delta_coefficients(60)?;
    let long = delta_coefficients(50_000)?;
    let s = c(2.5, 0.0);

    let integral = rankin_selberg_integral(&short, &short, s, 1e-9)?;
    let series = rankin_selberg_series(&LSeriesSpec::rankin_selberg(long.clone(), long)?, s)?;
    println!("I(2.5)            = {:.12e}", integral.value.re);
    println!("unfolded series   = {:.12e}", (series.value * unfolding_prefactor(12, s)?).re);

    let pair = LSeriesSpec::rankin_selberg(short.clone(), short)?;
    for s in [c(0.5, 0.0), c(0.3, 2.0), c(-1.0, 0.0)] {
        let l = rankin_selberg_l(&pair, s, 1e-9)?;
        println!("L({s}, Delta x Delta) = {:.10e}", l.value);
    }
    let fe = fe_residual(FEKind::Prop1, &pair, c(0.6, 0.0), 1e-9)?;
    println!("L(1-s) = Phi(s) L(s) at s = 0.6 with Phi = {}: relative residual {:.2e}", fe.gamma_expr_used, fe.rel_residual);
    Ok(())
}

//! The completed L-function of Δ: values, the functional equation and the
//! central value.

use automorphic::coefficients::delta_coefficients;
use automorphic::lseries::{completed_hecke_l, dirichlet_eval, fe_residual, FEKind, LSeriesSpec};
use automorphic::numerics::c;

fn main() -> automorphic::Result<()> {
    let delta = delta_coefficients(100)?;
    let spec = LSeriesSpec::standard(delta.clone());

    for w in [c(6.0, 0.0), c(6.0, 3.0), c(2.5, -7.0), c(14.0, 0.0)] {
        let r = completed_hecke_l(&delta, w)?;
        println!("Lambda({w}) = {:.15e} (+/- {:.1e}, {} terms)", r.value, r.error_estimate, r.terms);
    }

    let fe = fe_residual(FEKind::Hecke, &spec, c(4.5, 8.0), 1e-12)?;
    println!("Lambda(w) vs Lambda(12 - w) at 4.5+8i: relative residual {:.2e}", fe.rel_residual);

    let l = dirichlet_eval(&LSeriesSpec::standard(delta_coefficients(5000)?), c(2.0, 0.0), 5000)?;
    println!("L(2, Delta) unitary = {:.12} (tail bound {:.1e})", l.value.re, l.error_estimate);
    Ok(())
}

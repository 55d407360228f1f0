//! Gamma-factor ratios in the functional equations.

use automorphic::coefficients::SpectralData;
use automorphic::gamma_factors::{g_eta, linfty_fe_sign, prop1_for, prop2_consistency, prop2_expr};
use automorphic::numerics::c;

fn main() -> automorphic::Result<()> {
    let s = c(0.3, 4.0);
    for eta in [0, 1] {
        println!("G_{eta}(s) G_{eta}(1-s) = {:.15}", g_eta(eta, s)? * g_eta(eta, 1.0 - s)?);
    }

    let delta = SpectralData::holomorphic(12)?;
    let maass = SpectralData::maass(c(0.0, 2.0 * 9.533695261), 1)?;
    let phi = prop1_for(&delta, &maass)?;
    println!("Phi for Delta x Maass: {phi}");
    println!("Phi(s) Phi(1-s) = {:.15}", phi.eval(s)? * phi.eval(1.0 - s)?);
    println!("completed sign = {:.12}", linfty_fe_sign(&delta, &maass, s)?);

    let mu = [c(0.1, 1.0), c(-0.2, 0.5), c(0.05, -2.0), c(0.05, 0.5)];
    let eta = [1, 0, 1, 0];
    println!("exterior-square factor: {}", prop2_expr(&mu, &eta)?);
    let (lhs, rhs) = prop2_consistency(s, &mu, &eta)?;
    println!("consistency: {lhs:.12e} vs {rhs:.12e}");
    Ok(())
}

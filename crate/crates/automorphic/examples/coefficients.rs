//! Ramanujan τ(n), divisor-power coefficients and the Hecke relations.

use automorphic::coefficients::{check_hecke_relations, delta_coefficients, divisor_power_coeffs, eisenstein_qcoeffs};
use automorphic::numerics::c;

fn main() -> automorphic::Result<()> {
    let delta = delta_coefficients(2000)?;
    for n in [1, 2, 3, 10, 23] {
        println!("tau({n}) = {}", delta.integer(n).unwrap());
    }
    let report = check_hecke_relations(&delta);
    println!(
        "Hecke relations for n <= 2000: {} tested, max residual {} (exact: {})",
        report.relations_tested,
        report.max_residual(),
        report.exact
    );

    let e4 = eisenstein_qcoeffs(4, 6)?;
    println!("E_4 = 1 + {} * (sigma_3(n) q^n): {:?}", e4.scale, (1..=6).map(|n| e4.integer(n).unwrap()).collect::<Vec<_>>());

    let div = divisor_power_coeffs(c(0.5, 2.0), 12)?;
    println!("sum_(d|12) d^(-1/2-2i) = {}", div.get(12).unwrap());
    Ok(())
}

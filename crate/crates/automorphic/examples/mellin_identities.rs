//! Quadrature checks of the archimedean integral identities on the
//! bundled parameter grid.

use automorphic::mellin_oracle::{parse_identity_grid, verify_bessel_single, DEFAULT_GRID};
use automorphic::numerics::c;

fn main() -> automorphic::Result<()> {
    let r = verify_bessel_single(c(0.0, 0.0), c(2.0, 0.0))?;
    println!("int_0^inf K_0(y) y dy = {} (closed form {})", r.lhs, r.rhs);

    for case in parse_identity_grid(DEFAULT_GRID)? {
        let r = case.run()?;
        let verdict = if r.abs_residual <= case.tolerance() { "ok" } else { "FAIL" };
        println!("{verdict:4} {:<70} residual {:.2e}", r.describe(), r.abs_residual);
    }
    Ok(())
}

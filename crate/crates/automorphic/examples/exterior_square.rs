//! Exterior-square local factors of GL(4) through Schur polynomials.

use automorphic::extsquare::{js_verify, littlewood_verify, run_trials, schur_poly, Partition4, SatakeParams};
use automorphic::numerics::c;

fn main() -> automorphic::Result<()> {
    let alpha = SatakeParams::new([c(2.0, 0.0), c(0.5, 0.0), c(0.0, 1.0), c(0.0, -1.0)])?;
    for k in 0..4 {
        let s = schur_poly(Partition4::new([k, k, 0, 0])?, &alpha.alpha);
        println!("s_({k},{k},0,0)(alpha) = {s}");
    }
    let r = alpha.default_radius();
    println!("series identity residual {:.2e}", js_verify(&alpha, r, 12)?.max_residual);
    println!("Littlewood residual      {:.2e}", littlewood_verify(&alpha, r, 12)?.max_residual);

    let batch = run_trials(42, 100, 12)?;
    println!(
        "100 seeded trials: max residual {:.2e} (trial {}), Littlewood {:.2e}",
        batch.js_max, batch.js_worst_trial, batch.littlewood_max
    );
    Ok(())
}

//! The completed real-analytic Eisenstein series: Fourier expansion against
//! the lattice sum, the s -> 1 - s symmetry and the residue at s = 1.

use automorphic::eisenstein::{
    eval_completed_eisenstein, eval_direct_lattice, reduce_to_fundamental_domain, residue_at_one, UpperHalfPoint,
};
use automorphic::numerics::c;

fn main() -> automorphic::Result<()> {
    let z = UpperHalfPoint::new(3.3, 0.2)?;
    let red = reduce_to_fundamental_domain(z);
    println!("3.3+0.2i reduces to {} by {:?}", red.reduced.to_complex(), red.matrix);

    let s = c(2.5, 1.0);
    let expansion = eval_completed_eisenstein(s, z, 1e-13)?;
    let lattice = eval_direct_lattice(s, z)?;
    println!("E*({s}) expansion {:.15e}", expansion.value);
    println!("E*({s}) lattice   {:.15e}", lattice.value);

    let t = c(0.5, 9.0);
    let a = eval_completed_eisenstein(t, z, 1e-13)?.value;
    let b = eval_completed_eisenstein(1.0 - t, z, 1e-13)?.value;
    println!("E*(1/2+9i) = {a:.12e}, E*(1/2-9i) = {b:.12e}");

    println!("residue at s = 1: {}", residue_at_one().residue);
    Ok(())
}

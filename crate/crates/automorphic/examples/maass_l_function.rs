//! Completed L-function of a Maass form from an ingested coefficient file:
//!
//!     cargo run --example maass_l_function -- coefficients.txt
//!
//! Without a file a short synthetic series shows the computation.

use automorphic::coefficients::{load_maass_coefficients, CoefficientSeries, Normalization, SpectralData, Values};
use automorphic::lseries::{completed_maass_l, fe_residual, maass_completed_by_series, FEKind, LSeriesSpec};
use automorphic::numerics::c;

fn main() -> automorphic::Result<()> {
    let series = match std::env::args().nth(1) {
        Some(path) => load_maass_coefficients(path.as_ref())?,
        None => {
            println!("no file given; using a two-term synthetic series");
            let spectral = SpectralData::maass(c(0.0, 2.0 * 9.53), 0)?;
            let values = Values::Complex(vec![c(1.0, 0.0), c(-0.4, 0.0), c(0.0, 0.0)]);
            CoefficientSeries::new(spectral, values, Normalization::Unitary)
        }
    };
    for w in &series.warnings {
        println!("warning: {w}");
    }
    let spec = LSeriesSpec::standard(series.clone());
    for s in [c(0.5, 0.0), c(0.5, 5.0), c(3.0, 0.0)] {
        let r = completed_maass_l(&series, s, 1e-12)?;
        println!("Lambda({s}) = {:.12e} ({} terms)", r.value, r.terms);
    }
    let fe = fe_residual(FEKind::Maass, &spec, c(0.2, 3.0), 1e-12)?;
    println!("symmetry residual at 0.2+3i: {:.2e}", fe.rel_residual);
    let series_route = maass_completed_by_series(&series, c(3.0, 0.0))?;
    println!("Dirichlet route at s = 3: {:.12e}", series_route.value);
    Ok(())
}

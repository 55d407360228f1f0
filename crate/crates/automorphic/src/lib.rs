pub mod cli;
pub mod coefficients;
pub mod eisenstein;
pub mod error;
pub mod extsquare;
pub mod gamma_factors;
pub mod lseries;
pub mod mellin_oracle;
pub mod numerics;

pub use error::{Error, Result};
pub use numerics::Complex;

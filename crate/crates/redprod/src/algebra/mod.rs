//! Exact symbolic arithmetic: Gaussian rationals, linear forms, sparse
//! multivariate polynomials, and exponential-rational terms.

mod gaussian;
mod linear;
mod poly;
mod term;

pub use gaussian::{GaussianRational, Rat};
pub use linear::LinearForm;
pub use poly::MultiPoly;
pub use term::ExpRationalTerm;

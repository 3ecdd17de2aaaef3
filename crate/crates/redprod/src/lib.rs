//! Exact intersection pairings and symplectic volumes of reduced products of
//! adjoint orbits.
//!
//! The reduced product of N generic adjoint orbits of a compact simple group
//! carries pairings ∫ e^{iω}·κ(ζ) that localize to a Weyl-tuple sum of
//! exponential-rational integrands; this crate evaluates that sum with an
//! exact iterated-residue calculus over Gaussian rationals, and ships
//! independent numerical oracles (contour quadrature, sign-tuple enumeration,
//! convolution densities) that verify the engine and fix its one undetermined
//! normalization constant.
//!
//! Everything exact is `num`-backed rational arithmetic; floats appear only
//! in the oracles and in convenience conversions.

pub mod algebra;
pub mod calib;
pub mod check;
pub mod error;
pub mod lie;
pub mod oracle;
pub mod pairing;
pub mod problem;
pub mod residue;

pub use algebra::{ExpRationalTerm, GaussianRational, LinearForm, MultiPoly, Rat};
pub use calib::{calibrate_default, parse_rat, Calibration};
pub use error::{Error, GenericityViolation, NonGenericReport, Result};
pub use lie::{build_root_system, varpi, weyl_act, weyl_elements, RootSystem, WeylElement};
pub use pairing::{
    assemble_integrand, check_generic, dim_reduced, fixed_point_moment, intersection_number,
    is_strongly_generic, liouville_volume, pairing, raw_pairing, restrict_class, ClassFactor,
    ClassSpec, OrbitData, PairingResult, RestrictionMode,
};
pub use residue::{iterated_residue, residue_one_var, ResidueConfig};

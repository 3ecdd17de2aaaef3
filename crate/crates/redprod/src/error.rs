//! Error taxonomy shared across the crate.

use thiserror::Error;

/// Structured description of every genericity violation found in the input.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct NonGenericReport {
    pub violations: Vec<GenericityViolation>,
}

/// One violated genericity condition.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GenericityViolation {
    /// ⟨γ, ξ_j⟩ = 0 for some positive root γ: the orbit through ξ_j is not generic.
    Regularity { orbit: usize, root: Vec<String> },
    /// Σ_j w_j ξ_j = 0 for the named Weyl tuple (indices into `weyl_elements`).
    TupleSumZero { tuple: Vec<usize>, display: String },
    /// The exponent hit a residue wall mid-iteration (rank ≥ 2 degeneracy).
    ResidueWall { detail: String },
}

impl NonGenericReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl std::fmt::Display for NonGenericReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for v in &self.violations {
            match v {
                GenericityViolation::Regularity { orbit, root } => {
                    write!(f, "orbit {} lies on the root wall {:?}; ", orbit, root)?
                }
                GenericityViolation::TupleSumZero { display, .. } => {
                    write!(f, "tuple sum vanishes for {}; ", display)?
                }
                GenericityViolation::ResidueWall { detail } => write!(f, "{}; ", detail)?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported root system type {series}{rank}")]
    UnsupportedType { series: char, rank: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("substitution sends a denominator factor to the zero form")]
    SubstitutionPole,

    #[error("denominator factor vanishes at the evaluation point")]
    PoleAtPoint,

    #[error("non-generic input: {0}")]
    NonGeneric(NonGenericReport),

    #[error("a non-constant term survived the full residue iteration")]
    ResidueIncomplete,

    #[error("orbit index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("class degree {degree} does not match reduced dimension {dim_reduced}")]
    DegreeMismatch { degree: usize, dim_reduced: usize },

    #[error("calibrated value has a nonzero imaginary part: {0}")]
    ImaginaryResidue(String),

    #[error("no calibration entry for {group} with N={n}; run `calibrate` first")]
    CalibrationMissing { group: String, n: usize },

    #[error("quadrature failed to converge: residual {residual:e} exceeds {tolerance:e}")]
    ConvergenceFailure { residual: f64, tolerance: f64 },

    #[error("grid step {step} too coarse; need ≤ {max}")]
    GridTooCoarse { step: f64, max: f64 },

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

//! Rational linear functionals on 𝔱 in simple-coroot coordinates.
//!
//! The same type carries roots γ, class weights B, fixed-point exponents λ, and
//! pole roots during residue iteration.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, Zero};

use super::gaussian::Rat;

/// Homogeneous linear form Σ cᵢ xᵢ.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm {
    pub coeffs: Vec<Rat>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<Rat>) -> Self {
        Self { coeffs }
    }

    pub fn zero(nvars: usize) -> Self {
        Self {
            coeffs: vec![Rat::zero(); nvars],
        }
    }

    /// The coordinate functional x ↦ x_var.
    pub fn var(nvars: usize, var: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); nvars];
        coeffs[var] = Rat::from_integer(1.into());
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self {
            coeffs: coeffs
                .iter()
                .map(|&c| Rat::from_integer(c.into()))
                .collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn coeff(&self, var: usize) -> &Rat {
        &self.coeffs[var]
    }

    /// Evaluate at a rational point of 𝔱.
    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.coeffs.len());
        self.coeffs
            .iter()
            .zip(point)
            .map(|(c, x)| c * x)
            .fold(Rat::zero(), |a, b| a + b)
    }

    pub fn scale(&self, s: &Rat) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Zero out the coefficient on `var` and fold `c_var · replacement` into the rest.
    /// This is substitution x_var := replacement for a replacement free of x_var.
    pub fn substitute(&self, var: usize, replacement: &LinearForm) -> Self {
        debug_assert!(replacement.coeffs[var].is_zero());
        let c = self.coeffs[var].clone();
        let mut coeffs = self.coeffs.clone();
        coeffs[var] = Rat::zero();
        for (k, r) in coeffs.iter_mut().zip(&replacement.coeffs) {
            *k += &c * r;
        }
        Self { coeffs }
    }

    /// (ℓ ∘ M)(X) = ℓ(M X): coefficients become Mᵀ·c.
    pub fn compose(&self, matrix: &[Vec<Rat>]) -> Self {
        let n = self.coeffs.len();
        assert_eq!(matrix.len(), n);
        let mut coeffs = vec![Rat::zero(); n];
        for (j, out) in coeffs.iter_mut().enumerate() {
            for (i, c) in self.coeffs.iter().enumerate() {
                *out += c * &matrix[i][j];
            }
        }
        Self { coeffs }
    }

    /// Variables with a nonzero coefficient.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if first {
                write!(f, "{}*x{}", c, i)?;
                first = false;
            } else if c.is_negative() {
                write!(f, " - {}*x{}", -c.clone(), i)?;
            } else {
                write!(f, " + {}*x{}", c, i)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &LinearForm {
    type Output = LinearForm;
    fn add(self, rhs: &LinearForm) -> LinearForm {
        assert_eq!(self.coeffs.len(), rhs.coeffs.len());
        LinearForm {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &LinearForm {
    type Output = LinearForm;
    fn sub(self, rhs: &LinearForm) -> LinearForm {
        assert_eq!(self.coeffs.len(), rhs.coeffs.len());
        LinearForm {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &LinearForm {
    type Output = LinearForm;
    fn neg(self) -> LinearForm {
        LinearForm {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl Mul<&Rat> for &LinearForm {
    type Output = LinearForm;
    fn mul(self, s: &Rat) -> LinearForm {
        self.scale(s)
    }
}

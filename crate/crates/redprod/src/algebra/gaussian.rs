//! Gaussian rationals: exact complex numbers with rational real and imaginary parts.
//!
//! Residue extraction injects powers of i, so a single exact field keeps all
//! bookkeeping uniform instead of tracking i-powers separately.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

/// re + im·i with arbitrary-precision rational parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: Rat,
    pub im: Rat,
}

impl GaussianRational {
    pub fn new(re: Rat, im: Rat) -> Self {
        Self { re, im }
    }

    pub fn from_rat(re: Rat) -> Self {
        Self {
            re,
            im: Rat::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(Rat::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self {
            re: Rat::zero(),
            im: Rat::one(),
        }
    }

    /// i^k for any nonnegative k.
    pub fn i_pow(k: usize) -> Self {
        match k % 4 {
            0 => Self::one(),
            1 => Self::i(),
            2 => -Self::one(),
            _ => -Self::i(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn norm_sq(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Self {
        let n = self.norm_sq();
        assert!(!n.is_zero(), "division by zero GaussianRational");
        Self {
            re: &self.re / &n,
            im: -&self.im / &n,
        }
    }

    pub fn scale(&self, s: &Rat) -> Self {
        Self {
            re: &self.re * s,
            im: &self.im * s,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}{}i", self.re, self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl<'a> Add<&'a GaussianRational> for GaussianRational {
    type Output = Self;
    fn add(self, rhs: &'a Self) -> Self {
        Self {
            re: self.re + &rhs.re,
            im: self.im + &rhs.im,
        }
    }
}

impl AddAssign for GaussianRational {
    fn add_assign(&mut self, rhs: Self) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl SubAssign for GaussianRational {
    fn sub_assign(&mut self, rhs: Self) {
        self.re -= rhs.re;
        self.im -= rhs.im;
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        (&self).mul(&rhs)
    }
}

impl<'b> Mul<&'b GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &'b GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl MulAssign for GaussianRational {
    fn mul_assign(&mut self, rhs: Self) {
        *self = (&*self).mul(&rhs);
    }
}

impl Div for GaussianRational {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        (&self).mul(&rhs.inv())
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            re: -self.re,
            im: -self.im,
        }
    }
}

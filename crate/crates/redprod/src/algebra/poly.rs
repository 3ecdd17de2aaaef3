//! Sparse multivariate polynomials with Gaussian-rational coefficients.
//!
//! Monomials are exponent vectors keyed in a BTreeMap so iteration order, and
//! therefore every downstream serialization, is deterministic. Zero
//! coefficients are never stored.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gaussian::{GaussianRational, Rat};
use super::linear::LinearForm;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    pub nvars: usize,
    terms: BTreeMap<Vec<u32>, GaussianRational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, GaussianRational::one())
    }

    pub fn constant(nvars: usize, c: GaussianRational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, var: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[var] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(exps, GaussianRational::one());
        p
    }

    /// Degree-1 polynomial from a linear form.
    pub fn from_linear(form: &LinearForm) -> Self {
        let n = form.nvars();
        let mut p = Self::zero(n);
        for (i, c) in form.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut exps = vec![0; n];
                exps[i] = 1;
                p.terms.insert(exps, GaussianRational::from_rat(c.clone()));
            }
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    /// The coefficient of the constant monomial.
    pub fn constant_term(&self) -> GaussianRational {
        let key: Vec<u32> = vec![0; self.nvars];
        self.terms
            .get(&key)
            .cloned()
            .unwrap_or_else(GaussianRational::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &GaussianRational)> {
        self.terms.iter()
    }

    fn insert(&mut self, exps: Vec<u32>, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        let mut p = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            p.terms.insert(e.clone(), c * s);
        }
        p
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// ∂/∂x_var.
    pub fn derivative(&self, var: usize) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e[var];
            if k == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[var] = k - 1;
            p.insert(e2, c.scale(&Rat::from_integer(k.into())));
        }
        p
    }

    /// Substitute x_var := replacement (a form with zero coefficient on x_var).
    pub fn substitute_linear(&self, var: usize, replacement: &LinearForm) -> Self {
        debug_assert!(replacement.coeffs[var].is_zero());
        let repl = Self::from_linear(replacement);
        let mut out = Self::zero(self.nvars);
        // Cache powers of the replacement since the same exponent recurs.
        let mut powers: Vec<Self> = vec![Self::one(self.nvars)];
        for (e, c) in &self.terms {
            let k = e[var] as usize;
            while powers.len() <= k {
                let next = &powers[powers.len() - 1] * &repl;
                powers.push(next);
            }
            let mut e2 = e.clone();
            e2[var] = 0;
            let mut mono = Self::zero(self.nvars);
            mono.terms.insert(e2, c.clone());
            out = &out + &(&mono * &powers[k]);
        }
        out
    }

    /// P(M X): substitute every variable by the corresponding row-combination.
    pub fn compose_linear(&self, matrix: &[Vec<Rat>]) -> Self {
        let n = self.nvars;
        assert_eq!(matrix.len(), n);
        let images: Vec<Self> = (0..n)
            .map(|i| {
                // x_i ∘ M = Σ_j M[i][j] x_j
                Self::from_linear(&LinearForm::new(matrix[i].clone()))
            })
            .collect();
        let mut out = Self::zero(n);
        for (e, c) in &self.terms {
            let mut term = Self::constant(n, c.clone());
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    term = &term * &images[i];
                }
            }
            out = &out + &term;
        }
        out
    }

    pub fn eval(&self, point: &[Rat]) -> GaussianRational {
        assert_eq!(point.len(), self.nvars);
        let mut acc = GaussianRational::zero();
        for (e, c) in &self.terms {
            let mut m = Rat::one();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    m *= x;
                }
            }
            acc += c.scale(&m);
        }
        acc
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert(e.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = MultiPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let exps: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert(exps, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-GaussianRational::one())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", c)?;
            for (i, &k) in e.iter().enumerate() {
                if k == 1 {
                    write!(f, "*x{}", i)?;
                } else if k > 1 {
                    write!(f, "*x{}^{}", i, k)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, v: usize) -> MultiPoly {
        MultiPoly::var(n, v)
    }

    #[test]
    fn no_stored_zeros() {
        let p = &x(2, 0) - &x(2, 0);
        assert!(p.is_zero());
        assert_eq!(p.num_terms(), 0);
    }

    #[test]
    fn substitute_var_by_form() {
        // x₀² with x₀ := 3x₁ gives 9x₁²
        let p = x(2, 0).pow(2);
        let q = p.substitute_linear(0, &LinearForm::from_ints(&[0, 3]));
        let expected = x(2, 1).pow(2).scale(&GaussianRational::from_int(9));
        assert_eq!(q, expected);
    }

    #[test]
    fn derivative_of_product() {
        // d/dx₀ (x₀²x₁) = 2x₀x₁
        let p = &x(2, 0).pow(2) * &x(2, 1);
        let d = p.derivative(0);
        let expected = (&x(2, 0) * &x(2, 1)).scale(&GaussianRational::from_int(2));
        assert_eq!(d, expected);
    }

    #[test]
    fn total_degree() {
        let p = &(&x(3, 0) * &x(3, 1)) + &x(3, 2);
        assert_eq!(p.total_degree(), Some(2));
        assert_eq!(MultiPoly::zero(3).total_degree(), None);
    }
}

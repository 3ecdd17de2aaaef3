//! Exponential-rational terms c·e^{i⟨λ,X⟩}·P(X)/Π βⱼ(X)^{mⱼ}.
//!
//! Denominators stay factored: the residue engine needs pole locations per
//! linear factor, and expansion would destroy them.

use std::fmt;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

use super::gaussian::{GaussianRational, Rat};
use super::linear::LinearForm;
use super::poly::MultiPoly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpRationalTerm {
    pub coeff: GaussianRational,
    /// λ in e^{i⟨λ,X⟩}; real rational coefficients.
    pub exponent: LinearForm,
    pub numerator: MultiPoly,
    /// Factored denominator: (form, multiplicity), multiplicities ≥ 1.
    pub denominators: Vec<(LinearForm, u32)>,
}

impl ExpRationalTerm {
    /// Build a term, merging exactly-equal denominator forms and dropping
    /// zero-multiplicity entries. Panics on a zero denominator form.
    pub fn new(
        coeff: GaussianRational,
        exponent: LinearForm,
        numerator: MultiPoly,
        denominators: Vec<(LinearForm, u32)>,
    ) -> Self {
        let mut merged: Vec<(LinearForm, u32)> = Vec::new();
        for (form, mult) in denominators {
            if mult == 0 {
                continue;
            }
            assert!(!form.is_zero(), "zero form in denominator");
            match merged.iter_mut().find(|(f, _)| *f == form) {
                Some((_, m)) => *m += mult,
                None => merged.push((form, mult)),
            }
        }
        Self {
            coeff,
            exponent,
            numerator,
            denominators: merged,
        }
    }

    /// A bare constant, e.g. the output of a completed residue iteration.
    pub fn constant(nvars: usize, c: GaussianRational) -> Self {
        Self {
            coeff: c,
            exponent: LinearForm::zero(nvars),
            numerator: MultiPoly::one(nvars),
            denominators: Vec::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.exponent.nvars()
    }

    pub fn is_constant(&self) -> bool {
        self.exponent.is_zero() && self.numerator.is_constant() && self.denominators.is_empty()
    }

    /// Value as a Gaussian rational, if the term is constant.
    pub fn constant_value(&self) -> Option<GaussianRational> {
        if self.is_constant() {
            Some(&self.coeff * &self.numerator.constant_term())
        } else {
            None
        }
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        let mut t = self.clone();
        t.coeff = &t.coeff * s;
        t
    }

    /// ∂/∂x_var by the product rule over the exponential, the numerator, and
    /// each denominator factor. The returned terms sum to the derivative.
    pub fn differentiate(&self, var: usize) -> Vec<ExpRationalTerm> {
        let mut out = Vec::new();

        // exponential: i·λ_var · (same term)
        let lam = self.exponent.coeff(var).clone();
        if !lam.is_zero() {
            let mut t = self.clone();
            t.coeff = &t.coeff * &GaussianRational::new(Rat::zero(), lam);
            out.push(t);
        }

        // numerator
        let dnum = self.numerator.derivative(var);
        if !dnum.is_zero() {
            let mut t = self.clone();
            t.numerator = dnum;
            out.push(t);
        }

        // each denominator factor: d/dx β^{-m} = -m·β_var·β^{-(m+1)}
        for (j, (form, mult)) in self.denominators.iter().enumerate() {
            let b = form.coeff(var).clone();
            if b.is_zero() {
                continue;
            }
            let mut dens = self.denominators.clone();
            dens[j].1 = mult + 1;
            let factor = GaussianRational::from_rat(-Rat::from_integer((*mult).into()) * b);
            out.push(ExpRationalTerm {
                coeff: &self.coeff * &factor,
                exponent: self.exponent.clone(),
                numerator: self.numerator.clone(),
                denominators: dens,
            });
        }

        out
    }

    /// Substitute x_var := replacement (a form with zero coefficient on x_var).
    /// Errors with SubstitutionPole if a denominator factor vanishes identically.
    pub fn substitute(&self, var: usize, replacement: &LinearForm) -> Result<ExpRationalTerm> {
        if !replacement.coeff(var).is_zero() {
            return Err(Error::Validation(
                "replacement form must not involve the substituted variable".into(),
            ));
        }
        let mut dens = Vec::with_capacity(self.denominators.len());
        for (form, mult) in &self.denominators {
            let f = form.substitute(var, replacement);
            if f.is_zero() {
                return Err(Error::SubstitutionPole);
            }
            dens.push((f, *mult));
        }
        Ok(ExpRationalTerm::new(
            self.coeff.clone(),
            self.exponent.substitute(var, replacement),
            self.numerator.substitute_linear(var, replacement),
            dens,
        ))
    }

    /// Floating evaluation at a rational point; exact up to the final f64
    /// rounding of rationals and the complex exponential.
    pub fn evaluate(&self, point: &[Rat]) -> Result<Complex64> {
        let mut den = Rat::from_integer(1.into());
        for (form, mult) in &self.denominators {
            let v = form.eval(point);
            if v.is_zero() {
                return Err(Error::PoleAtPoint);
            }
            for _ in 0..*mult {
                den *= &v;
            }
        }
        let num = self.numerator.eval(point);
        let exact = (&self.coeff * &num).scale(&(Rat::from_integer(1.into()) / den));
        let theta = self
            .exponent
            .eval(point)
            .to_f64()
            .ok_or_else(|| Error::Validation("exponent value does not fit in f64".into()))?;
        Ok(exact.to_complex() * Complex64::from_polar(1.0, theta))
    }
}

impl fmt::Display for ExpRationalTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({})·e^{{i({})}}·[{}]",
            self.coeff, self.exponent, self.numerator
        )?;
        for (form, mult) in &self.denominators {
            write!(f, "/({})^{}", form, mult)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    fn eval_sum(terms: &[ExpRationalTerm], point: &[Rat]) -> Complex64 {
        terms.iter().map(|t| t.evaluate(point).unwrap()).sum()
    }

    /// Centered finite difference of `evaluate` in x_var — the independent
    /// oracle for `differentiate`.
    fn finite_difference(t: &ExpRationalTerm, var: usize, point: &[Rat], h: Rat) -> Complex64 {
        let mut hi = point.to_vec();
        hi[var] += &h;
        let mut lo = point.to_vec();
        lo[var] -= &h;
        let fh = t.evaluate(&hi).unwrap();
        let fl = t.evaluate(&lo).unwrap();
        (fh - fl) / (2.0 * h.to_f64().unwrap())
    }

    #[test]
    fn derivative_of_exponential() {
        // d/dx e^{iλx} = iλ e^{iλx}, λ = 1
        let t = ExpRationalTerm::new(
            GaussianRational::one(),
            LinearForm::from_ints(&[1]),
            MultiPoly::one(1),
            vec![],
        );
        let d = t.differentiate(0);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].coeff, GaussianRational::i());
        assert_eq!(d[0].exponent, t.exponent);
    }

    #[test]
    fn derivative_of_reciprocal() {
        // d/dx 1/x = -1/x²
        let t = ExpRationalTerm::new(
            GaussianRational::one(),
            LinearForm::zero(1),
            MultiPoly::one(1),
            vec![(LinearForm::from_ints(&[1]), 1)],
        );
        let d = t.differentiate(0);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].coeff, -GaussianRational::one());
        assert_eq!(d[0].denominators, vec![(LinearForm::from_ints(&[1]), 2)]);
    }

    #[test]
    fn derivative_of_exp_times_x_matches_oracle() {
        // d/dx (e^{2ix}·x) = e^{2ix}(1 + 2ix), checked at x = 1/3 against the
        // finite-difference oracle and against closed-form trig.
        let t = ExpRationalTerm::new(
            GaussianRational::one(),
            LinearForm::from_ints(&[2]),
            MultiPoly::var(1, 0),
            vec![],
        );
        let d = t.differentiate(0);
        let p = vec![rat(1, 3)];
        let got = eval_sum(&d, &p);
        let oracle = finite_difference(&t, 0, &p, rat(1, 100_000));
        assert!(
            (got - oracle).norm() < 1e-6,
            "got {} oracle {}",
            got,
            oracle
        );
        // e^{2i/3}(1 + 2i/3)
        let (s, c) = (2.0f64 / 3.0).sin_cos();
        let expected = Complex64::new(c, s) * Complex64::new(1.0, 2.0 / 3.0);
        assert!((got - expected).norm() < 1e-12);
    }

    #[test]
    fn substitute_examples() {
        // e^{i(2x₀+x₁)}/x₁ with x₀ := -x₁ gives e^{-ix₁}/x₁
        let t = ExpRationalTerm::new(
            GaussianRational::one(),
            LinearForm::from_ints(&[2, 1]),
            MultiPoly::one(2),
            vec![(LinearForm::from_ints(&[0, 1]), 1)],
        );
        let s = t.substitute(0, &LinearForm::from_ints(&[0, -1])).unwrap();
        assert_eq!(s.exponent, LinearForm::from_ints(&[0, -1]));
        assert_eq!(s.denominators, vec![(LinearForm::from_ints(&[0, 1]), 1)]);

        // 1/(x₀+x₁) with x₀ := -x₁ is a substitution pole
        let t = ExpRationalTerm::new(
            GaussianRational::one(),
            LinearForm::zero(2),
            MultiPoly::one(2),
            vec![(LinearForm::from_ints(&[1, 1]), 1)],
        );
        assert!(matches!(
            t.substitute(0, &LinearForm::from_ints(&[0, -1])),
            Err(Error::SubstitutionPole)
        ));
    }

    #[test]
    fn substitute_scales_numerator() {
        // e^{ix₀}·x₀² with x₀ := 3x₁ gives e^{3ix₁}·9x₁², cross-checked at x₁ = 1.
        let t = ExpRationalTerm::new(
            GaussianRational::one(),
            LinearForm::from_ints(&[1, 0]),
            MultiPoly::var(2, 0).pow(2),
            vec![],
        );
        let s = t.substitute(0, &LinearForm::from_ints(&[0, 3])).unwrap();
        assert_eq!(s.exponent, LinearForm::from_ints(&[0, 3]));
        let got = s.evaluate(&[rat(0, 1), rat(1, 1)]).unwrap();
        let (si, co) = 3.0f64.sin_cos();
        let expected = Complex64::new(co, si) * 9.0;
        assert!((got - expected).norm() < 1e-12);
        // commutes with evaluating the original at x₀ = 3
        let orig = t.evaluate(&[rat(3, 1), rat(1, 1)]).unwrap();
        assert!((got - orig).norm() < 1e-12);
    }

    #[test]
    fn evaluate_basics() {
        let one = ExpRationalTerm::constant(1, GaussianRational::one());
        assert!((one.evaluate(&[rat(5, 7)]).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-15);

        let inv_x = ExpRationalTerm::new(
            GaussianRational::one(),
            LinearForm::zero(1),
            MultiPoly::one(1),
            vec![(LinearForm::from_ints(&[1]), 1)],
        );
        assert!(matches!(
            inv_x.evaluate(&[rat(0, 1)]),
            Err(Error::PoleAtPoint)
        ));

        // e^{2ix} at x=1 is cos 2 + i sin 2
        let t = ExpRationalTerm::new(
            GaussianRational::one(),
            LinearForm::from_ints(&[2]),
            MultiPoly::one(1),
            vec![],
        );
        let got = t.evaluate(&[rat(1, 1)]).unwrap();
        let (s, c) = 2.0f64.sin_cos();
        assert!((got - Complex64::new(c, s)).norm() < 1e-14);
    }

    #[test]
    fn equal_denominator_forms_merge() {
        let t = ExpRationalTerm::new(
            GaussianRational::one(),
            LinearForm::zero(1),
            MultiPoly::one(1),
            vec![
                (LinearForm::from_ints(&[2]), 1),
                (LinearForm::from_ints(&[2]), 2),
            ],
        );
        assert_eq!(t.denominators, vec![(LinearForm::from_ints(&[2]), 3)]);
    }
}

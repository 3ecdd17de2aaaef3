//! Iterated one-variable residues on exponential-rational terms.
//!
//! The one-variable rule is the operational content of a Fourier residue with
//! the contour closed in the upper half plane: a term whose exponent
//! coefficient on the active variable is negative contributes nothing; a term
//! with positive coefficient contributes the local residues at every pole in
//! that variable. Poles sharing an exact root are merged into one
//! higher-multiplicity pole before extraction, so exactly representable
//! coincidences never need floating fuzz.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::algebra::{ExpRationalTerm, GaussianRational, LinearForm, Rat};
use crate::error::{Error, GenericityViolation, NonGenericReport, Result};

/// Variable order (and a reserved polarization slot) for the iteration.
#[derive(Debug, Clone)]
pub struct ResidueConfig {
    /// Permutation of {0..rank−1}; residues are taken in this order.
    pub variable_order: Vec<usize>,
    /// Reserved; only reported in diagnostics.
    pub polarization: Option<Vec<Rat>>,
}

impl ResidueConfig {
    /// Default order: descending coordinate index.
    pub fn descending(rank: usize) -> Self {
        Self {
            variable_order: (0..rank).rev().collect(),
            polarization: None,
        }
    }

    pub fn with_order(order: Vec<usize>) -> Result<Self> {
        let rank = order.len();
        let mut seen = vec![false; rank];
        for &v in &order {
            if v >= rank || seen[v] {
                return Err(Error::Validation(format!(
                    "variable_order {:?} is not a permutation",
                    order
                )));
            }
            seen[v] = true;
        }
        Ok(Self {
            variable_order: order,
            polarization: None,
        })
    }
}

fn non_generic(detail: String) -> Error {
    Error::NonGeneric(NonGenericReport {
        violations: vec![GenericityViolation::ResidueWall { detail }],
    })
}

/// One-variable residue of a single term in x_var.
///
/// Returns the (possibly empty) list of terms in the remaining variables.
/// Errors with NonGeneric when the exponent does not involve x_var at all —
/// the keep/drop rule is undefined on that wall.
pub fn residue_one_var(term: &ExpRationalTerm, var: usize) -> Result<Vec<ExpRationalTerm>> {
    let c = term.exponent.coeff(var).clone();
    if c.is_zero() {
        return Err(non_generic(format!(
            "exponent has zero coefficient on x{} (λ = {})",
            var, term.exponent
        )));
    }
    if c.is_negative() {
        return Ok(Vec::new());
    }

    // Group the denominator factors involving x_var by their exact root
    // x_var = ρ(remaining variables).
    let mut groups: BTreeMap<LinearForm, Vec<usize>> = BTreeMap::new();
    for (idx, (form, _)) in term.denominators.iter().enumerate() {
        let b = form.coeff(var);
        if b.is_zero() {
            continue;
        }
        let mut root = form.scale(&(-Rat::one() / b));
        root.coeffs[var] = Rat::zero();
        groups.entry(root).or_default().push(idx);
    }
    if groups.is_empty() {
        // decaying integrand with no pole in this variable
        return Ok(Vec::new());
    }

    let mut out = Vec::new();
    for (root, idxs) in &groups {
        // Total pole multiplicity and the product of leading coefficients,
        // from β^m = b^m (x_var − ρ)^m.
        let mut m_total: u32 = 0;
        let mut lead = Rat::one();
        for &idx in idxs {
            let (form, mult) = &term.denominators[idx];
            m_total += mult;
            let b = form.coeff(var);
            for _ in 0..*mult {
                lead *= b;
            }
        }

        // Pole-removed term h = t·Π_{β in group} β^{m_β}, divided by Π b^m.
        let mut h = term.clone();
        h.denominators = term
            .denominators
            .iter()
            .enumerate()
            .filter(|(idx, _)| !idxs.contains(idx))
            .map(|(_, d)| d.clone())
            .collect();
        h.coeff = h.coeff.scale(&(Rat::one() / lead));

        // local residue = (1/(m−1)!)·∂^{m−1} h |_{x_var = ρ}
        let mut pieces = vec![h];
        for _ in 1..m_total {
            pieces = pieces.iter().flat_map(|t| t.differentiate(var)).collect();
        }
        let mut factorial = Rat::one();
        for j in 2..m_total {
            factorial *= Rat::from_integer(j.into());
        }
        let inv_fact = GaussianRational::from_rat(Rat::one() / factorial);
        for piece in pieces {
            let substituted = piece.substitute(var, root)?;
            out.push(substituted.scale(&inv_fact));
        }
    }
    Ok(out)
}

/// Apply `residue_one_var` successively in the configured order and sum the
/// surviving constants. Deterministic for a fixed configuration.
pub fn iterated_residue(
    terms: &[ExpRationalTerm],
    cfg: &ResidueConfig,
) -> Result<GaussianRational> {
    for t in terms {
        if t.exponent.is_zero() {
            return Err(non_generic("term with identically zero exponent".into()));
        }
    }
    let mut current: Vec<ExpRationalTerm> = terms.to_vec();
    for &var in &cfg.variable_order {
        let mut next = Vec::new();
        for t in &current {
            next.extend(residue_one_var(t, var)?);
        }
        current = next;
    }
    let mut acc = GaussianRational::zero();
    for t in &current {
        match t.constant_value() {
            Some(v) => acc += v,
            None => return Err(Error::ResidueIncomplete),
        }
    }
    Ok(acc)
}

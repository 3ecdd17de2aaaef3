//! Assembly of the Weyl-sum integrand over W^N, genericity validation,
//! residue application, and the calibrated volume / intersection operations.
//!
//! Orbit representatives are normalized to the dominant chamber before the
//! sum is assembled: the per-factor sign in the localization sum belongs to
//! the fixed point itself, and normalization is what makes the result an
//! exact invariant of the orbits rather than of their representatives.

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::algebra::{ExpRationalTerm, GaussianRational, LinearForm, MultiPoly, Rat};
use crate::calib::Calibration;
use crate::error::{Error, GenericityViolation, NonGenericReport, Result};
use crate::lie::{weyl_elements, RootSystem, WeylElement};
use crate::residue::{iterated_residue, ResidueConfig};

/// The N orbit representatives ξ_j (simple-coroot coordinates) and their
/// root system.
#[derive(Debug, Clone)]
pub struct OrbitData {
    pub rs: RootSystem,
    pub xi: Vec<Vec<Rat>>,
}

impl OrbitData {
    pub fn new(rs: RootSystem, xi: Vec<Vec<Rat>>) -> Result<Self> {
        if xi.len() < 3 {
            return Err(Error::Validation(format!(
                "need at least 3 orbits, got {}",
                xi.len()
            )));
        }
        for (j, v) in xi.iter().enumerate() {
            if v.len() != rs.rank {
                return Err(Error::DimensionMismatch {
                    expected: rs.rank,
                    got: v.len(),
                });
            }
            let _ = j;
        }
        Ok(Self { rs, xi })
    }

    pub fn n_orbits(&self) -> usize {
        self.xi.len()
    }

    /// The same orbits presented by their dominant representatives.
    pub fn normalized(&self) -> OrbitData {
        OrbitData {
            rs: self.rs.clone(),
            xi: self
                .xi
                .iter()
                .map(|v| self.rs.dominant_representative(v))
                .collect(),
        }
    }
}

/// How ζ restricts at a fixed point labelled by a Weyl tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
#[derive(Default)]
pub enum RestrictionMode {
    /// Π (B_ℓ ∘ w_ℓ⁻¹)(X)^{n_ℓ}: restriction at the fixed point w_ℓ·ξ_ℓ.
    #[default]
    WeylTwisted,
    /// Π B_ℓ(X)^{n_ℓ} independent of the tuple, as displayed in the pairing
    /// formula.
    Literal,
}

/// One factor (c₁^eq of the weight-B line bundle on orbit ℓ)^power.
#[derive(Debug, Clone)]
pub struct ClassFactor {
    /// 1-based orbit index.
    pub orbit: usize,
    pub weight: LinearForm,
    pub power: u32,
}

/// ζ as a formal product of powers of equivariant first Chern classes.
#[derive(Debug, Clone)]
pub struct ClassSpec {
    pub factors: Vec<ClassFactor>,
    pub restriction_mode: RestrictionMode,
}

impl ClassSpec {
    /// ζ = 1.
    pub fn one() -> Self {
        Self {
            factors: Vec::new(),
            restriction_mode: RestrictionMode::default(),
        }
    }

    pub fn new(factors: Vec<ClassFactor>, restriction_mode: RestrictionMode) -> Result<Self> {
        for f in &factors {
            if f.power == 0 {
                return Err(Error::Validation("class factor powers must be ≥ 1".into()));
            }
            if f.weight.is_zero() {
                return Err(Error::Validation("class weights must be nonzero".into()));
            }
            // integral on the coroot lattice: integer coefficients
            if f.weight.coeffs.iter().any(|c| !c.is_integer()) {
                return Err(Error::Validation(
                    "class weights must be integral on the coroot lattice".into(),
                ));
            }
        }
        Ok(Self {
            factors,
            restriction_mode,
        })
    }

    /// Cohomological degree 2·Σ n_ℓ.
    pub fn degree(&self) -> usize {
        2 * self.factors.iter().map(|f| f.power as usize).sum::<usize>()
    }

    pub fn validate_for(&self, n_orbits: usize) -> Result<()> {
        for f in &self.factors {
            if f.orbit == 0 || f.orbit > n_orbits {
                return Err(Error::IndexOutOfRange {
                    index: f.orbit,
                    n: n_orbits,
                });
            }
        }
        Ok(())
    }
}

/// Calibrated pairing value with provenance.
#[derive(Debug, Clone)]
pub struct PairingResult {
    /// Uncalibrated residue value.
    pub raw: GaussianRational,
    /// C(rs, N) · raw.
    pub value: GaussianRational,
    pub contributing_tuples: usize,
    pub dim_reduced: usize,
}

/// Dimension of the reduced product: N(dim G − dim T) − 2 dim G.
pub fn dim_reduced(rs: &RootSystem, n_orbits: usize) -> usize {
    let raw = n_orbits as i64 * (rs.dim_g as i64 - rs.dim_t as i64) - 2 * rs.dim_g as i64;
    debug_assert!(raw >= 0, "reduced dimension negative — N too small");
    raw.max(0) as usize
}

fn tuple_display(rs: &RootSystem, tuple: &[usize]) -> String {
    if rs.rank == 1 {
        let mut s = String::from("(");
        for (j, &k) in tuple.iter().enumerate() {
            if j > 0 {
                s.push(',');
            }
            s.push(if k == 0 { '+' } else { '-' });
        }
        s.push(')');
        s
    } else {
        format!(
            "({})",
            tuple
                .iter()
                .map(|k| format!("w{}", k))
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

/// Genericity report: (a) every ξ_j is regular, and (b) no Weyl tuple sum
/// Σ w_j ξ_j vanishes. Returns a value; an empty report means ok.
pub fn check_generic(od: &OrbitData) -> NonGenericReport {
    let mut violations = Vec::new();
    for (j, v) in od.xi.iter().enumerate() {
        for g in &od.rs.positive_roots {
            if g.eval(v).is_zero() {
                violations.push(GenericityViolation::Regularity {
                    orbit: j + 1,
                    root: g.coeffs.iter().map(|c| c.to_string()).collect(),
                });
            }
        }
    }

    let ws = weyl_elements(&od.rs);
    let n = od.n_orbits();
    // images[j][k] = w_k · ξ_j
    let images: Vec<Vec<Vec<Rat>>> = od
        .xi
        .iter()
        .map(|v| {
            ws.iter()
                .map(|w| crate::lie::mat_vec(&w.matrix, v))
                .collect()
        })
        .collect();
    let total = (ws.len() as u128).pow(n as u32);
    let mut tuple = vec![0usize; n];
    for _ in 0..total {
        let mut sum = vec![Rat::zero(); od.rs.rank];
        for (j, &k) in tuple.iter().enumerate() {
            for (s, x) in sum.iter_mut().zip(&images[j][k]) {
                *s += x;
            }
        }
        if sum.iter().all(Zero::is_zero) {
            violations.push(GenericityViolation::TupleSumZero {
                tuple: tuple.clone(),
                display: tuple_display(&od.rs, &tuple),
            });
        }
        // increment mixed-radix counter
        for slot in tuple.iter_mut() {
            *slot += 1;
            if *slot < ws.len() {
                break;
            }
            *slot = 0;
        }
    }
    NonGenericReport { violations }
}

/// Stronger pre-screen than `check_generic` for rank ≥ 2 inputs: besides the
/// tuple sums being nonzero, none may lie on a root wall (⟨γ, v⟩ = 0) or on a
/// root line (v ∝ the root vector of γ). Either degeneracy makes the residue
/// iteration hit a wall in some variable order; the engine then reports
/// NonGeneric. Used to select sample points; not part of the input contract.
pub fn is_strongly_generic(od: &OrbitData) -> bool {
    if !check_generic(od).is_ok() {
        return false;
    }
    let ws = weyl_elements(&od.rs);
    let n = od.n_orbits();
    let rank = od.rs.rank;
    let images: Vec<Vec<Vec<Rat>>> = od
        .xi
        .iter()
        .map(|v| {
            ws.iter()
                .map(|w| crate::lie::mat_vec(&w.matrix, v))
                .collect()
        })
        .collect();
    // root vectors in coroot coordinates solve C·t = coeffs(γ)
    let cinv = crate::lie::mat_inverse(&od.rs.cartan_pairing).expect("Cartan invertible");
    let root_vectors: Vec<Vec<Rat>> = od
        .rs
        .positive_roots
        .iter()
        .map(|g| crate::lie::mat_vec(&cinv, &g.coeffs))
        .collect();

    let total = (ws.len() as u128).pow(n as u32);
    let mut tuple = vec![0usize; n];
    for _ in 0..total {
        let mut v = vec![Rat::zero(); rank];
        for (j, &k) in tuple.iter().enumerate() {
            for (s, x) in v.iter_mut().zip(&images[j][k]) {
                *s += x;
            }
        }
        for g in &od.rs.positive_roots {
            if g.eval(&v).is_zero() {
                return false;
            }
        }
        if rank >= 2 {
            for t in &root_vectors {
                let proportional = (0..rank)
                    .all(|i| (i + 1..rank).all(|j| (&v[i] * &t[j] - &v[j] * &t[i]).is_zero()));
                if proportional {
                    return false;
                }
            }
        }
        for slot in tuple.iter_mut() {
            *slot += 1;
            if *slot < ws.len() {
                break;
            }
            *slot = 0;
        }
    }
    true
}

/// The exponent form at the fixed point of a Weyl tuple:
/// X ↦ ⟨Σ_j w_j ξ_j, X⟩ in the coroot-normalized pairing (half the Cartan
/// pairing), which keeps rank-1 exponents equal to the plain signed sums.
pub fn fixed_point_moment(od: &OrbitData, tuple: &[&WeylElement]) -> LinearForm {
    assert_eq!(tuple.len(), od.n_orbits());
    let r = od.rs.rank;
    let mut sum = vec![Rat::zero(); r];
    for (w, xi) in tuple.iter().zip(&od.xi) {
        for (s, x) in sum.iter_mut().zip(crate::lie::mat_vec(&w.matrix, xi)) {
            *s += x;
        }
    }
    let half = Rat::new(1.into(), 2.into());
    let mut coeffs = vec![Rat::zero(); r];
    for (i, c) in coeffs.iter_mut().enumerate() {
        for (j, s) in sum.iter().enumerate() {
            *c += &od.rs.cartan_pairing[i][j] * s;
        }
        *c *= &half;
    }
    LinearForm::new(coeffs)
}

/// Restriction of ζ at the fixed point labelled by the tuple.
pub fn restrict_class(zeta: &ClassSpec, tuple: &[&WeylElement], rank: usize) -> Result<MultiPoly> {
    zeta.validate_for(tuple.len())?;
    let mut out = MultiPoly::one(rank);
    for f in &zeta.factors {
        let form = match zeta.restriction_mode {
            RestrictionMode::Literal => f.weight.clone(),
            RestrictionMode::WeylTwisted => {
                let w_inv = tuple[f.orbit - 1].inverse();
                f.weight.compose(&w_inv.matrix)
            }
        };
        let base = MultiPoly::from_linear(&form);
        out = &out * &base.pow(f.power);
    }
    Ok(out)
}

fn decode_tuple(mut index: u64, radix: usize, n: usize) -> Vec<usize> {
    let mut tuple = vec![0usize; n];
    for t in tuple.iter_mut() {
        *t = (index % radix as u64) as usize;
        index /= radix as u64;
    }
    tuple
}

fn tuple_term(
    od: &OrbitData,
    zeta: &ClassSpec,
    ws: &[WeylElement],
    tuple: &[usize],
) -> Result<ExpRationalTerm> {
    let refs: Vec<&WeylElement> = tuple.iter().map(|&k| &ws[k]).collect();
    let sign: i64 = refs.iter().map(|w| w.sign as i64).product();
    let exponent = fixed_point_moment(od, &refs);
    let numerator = restrict_class(zeta, &refs, od.rs.rank)?;
    let mult = (od.n_orbits() - 2) as u32;
    let denominators = od
        .rs
        .positive_roots
        .iter()
        .map(|g| (g.clone(), mult))
        .collect();
    Ok(ExpRationalTerm::new(
        GaussianRational::from_int(sign),
        exponent,
        numerator,
        denominators,
    ))
}

/// The |W|^N localization terms of the pairing sum: tuple w contributes
/// sgn(w)·e^{i⟨μ_T(w·ξ),X⟩}·ζ(X)|_{w·ξ} / ϖ(X)^{N−2}.
pub fn assemble_integrand(od: &OrbitData, zeta: &ClassSpec) -> Result<Vec<ExpRationalTerm>> {
    let report = check_generic(od);
    if !report.is_ok() {
        return Err(Error::NonGeneric(report));
    }
    zeta.validate_for(od.n_orbits())?;
    let odn = od.normalized();
    let ws = weyl_elements(&odn.rs);
    let total = tuple_count(ws.len(), odn.n_orbits())?;
    (0..total)
        .map(|idx| {
            tuple_term(
                &odn,
                zeta,
                &ws,
                &decode_tuple(idx, ws.len(), odn.n_orbits()),
            )
        })
        .collect()
}

fn tuple_count(radix: usize, n: usize) -> Result<u64> {
    let total = (radix as u128).pow(n as u32);
    u64::try_from(total).map_err(|_| Error::Validation(format!("W^N too large: {}^{}", radix, n)))
}

/// Uncalibrated residue of the full integrand under the given variable
/// order. Returns the exact sum and the count of tuples with a nonzero
/// contribution. Per-tuple residues are independent, so the Weyl sum is
/// partitioned across workers and reduced exactly.
pub fn raw_pairing(
    od: &OrbitData,
    zeta: &ClassSpec,
    cfg: &ResidueConfig,
) -> Result<(GaussianRational, usize)> {
    let report = check_generic(od);
    if !report.is_ok() {
        return Err(Error::NonGeneric(report));
    }
    zeta.validate_for(od.n_orbits())?;
    let odn = od.normalized();
    let ws = weyl_elements(&odn.rs);
    let total = tuple_count(ws.len(), odn.n_orbits())?;

    let results: Vec<(GaussianRational, bool)> = (0..total)
        .into_par_iter()
        .map(|idx| {
            let tuple = decode_tuple(idx, ws.len(), odn.n_orbits());
            let term = tuple_term(&odn, zeta, &ws, &tuple)?;
            let value = iterated_residue(&[term], cfg)?;
            let contributed = !value.is_zero();
            Ok((value, contributed))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut acc = GaussianRational::zero();
    let mut contributing = 0usize;
    for (v, c) in results {
        acc += v;
        contributing += c as usize;
    }
    Ok((acc, contributing))
}

/// ∫ e^{iω_red} κ(ζ) with the frozen calibration constant applied.
pub fn pairing(od: &OrbitData, zeta: &ClassSpec, calib: &Calibration) -> Result<PairingResult> {
    pairing_with_config(od, zeta, calib, &ResidueConfig::descending(od.rs.rank))
}

pub fn pairing_with_config(
    od: &OrbitData,
    zeta: &ClassSpec,
    calib: &Calibration,
    cfg: &ResidueConfig,
) -> Result<PairingResult> {
    let constant = calib.constant(&od.rs, od.n_orbits())?;
    let (raw, contributing_tuples) = raw_pairing(od, zeta, cfg)?;
    let value = raw.scale(&constant);
    Ok(PairingResult {
        raw,
        value,
        contributing_tuples,
        dim_reduced: dim_reduced(&od.rs, od.n_orbits()),
    })
}

/// ∫ κ(ζ) when degree(ζ) = dim_reduced; the real rational intersection
/// number.
pub fn intersection_number(od: &OrbitData, zeta: &ClassSpec, calib: &Calibration) -> Result<Rat> {
    let d = dim_reduced(&od.rs, od.n_orbits());
    if zeta.degree() != d {
        return Err(Error::DegreeMismatch {
            degree: zeta.degree(),
            dim_reduced: d,
        });
    }
    let res = pairing(od, zeta, calib)?;
    if !res.value.is_real() {
        return Err(Error::ImaginaryResidue(res.value.to_string()));
    }
    Ok(res.value.re)
}

/// ∫ ω_red^{d/2} / (d/2)! via the ζ = 1 pairing: value·(d/2)!/i^{d/2},
/// asserted real.
pub fn liouville_volume(od: &OrbitData, calib: &Calibration) -> Result<Rat> {
    liouville_volume_with_config(od, calib, &ResidueConfig::descending(od.rs.rank))
}

pub fn liouville_volume_with_config(
    od: &OrbitData,
    calib: &Calibration,
    cfg: &ResidueConfig,
) -> Result<Rat> {
    let res = pairing_with_config(od, &ClassSpec::one(), calib, cfg)?;
    let q = res.dim_reduced / 2;
    let mut factorial = Rat::one();
    for j in 2..=q {
        factorial *= Rat::from_integer((j as u64).into());
    }
    // value·q!/i^q; i^{-q} = i^{(4 - q mod 4) mod 4}
    let inv_i_pow = GaussianRational::i_pow((4 - q % 4) % 4);
    let vol = (&res.value.scale(&factorial)) * &inv_i_pow;
    if !vol.is_real() {
        return Err(Error::ImaginaryResidue(vol.to_string()));
    }
    Ok(vol.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::build_root_system;
    use crate::oracle::brute_force_sign_sum;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(n.into(), d.into())
    }

    fn a1_orbits(xi: &[(i64, i64)]) -> OrbitData {
        let rs = build_root_system('A', 1).unwrap();
        OrbitData::new(rs, xi.iter().map(|&(n, d)| vec![rat(n, d)]).collect()).unwrap()
    }

    #[test]
    fn dim_reduced_values() {
        let a1 = build_root_system('A', 1).unwrap();
        let a2 = build_root_system('A', 2).unwrap();
        assert_eq!(dim_reduced(&a2, 3), 2);
        assert_eq!(dim_reduced(&a1, 3), 0);
        assert_eq!(dim_reduced(&a1, 5), 4);
        for n in 3..=6 {
            assert_eq!(dim_reduced(&a1, n), 2 * (n - 3));
        }
    }

    #[test]
    fn check_generic_examples() {
        assert!(check_generic(&a1_orbits(&[(1, 1), (1, 1), (3, 2)])).is_ok());

        let report = check_generic(&a1_orbits(&[(1, 1), (1, 1), (2, 1)]));
        assert!(!report.is_ok());
        assert!(report.violations.iter().any(|v| matches!(
            v,
            GenericityViolation::TupleSumZero { display, .. } if display == "(+,+,-)"
        )));

        // A2 orbit on the α₁ wall: ⟨α₁, ξ⟩ = 2·1 − 2 = 0
        let rs = build_root_system('A', 2).unwrap();
        let od = OrbitData::new(
            rs,
            vec![
                vec![rat(1, 1), rat(2, 1)],
                vec![rat(1, 1), rat(1, 1)],
                vec![rat(1, 1), rat(1, 1)],
            ],
        )
        .unwrap();
        let report = check_generic(&od);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, GenericityViolation::Regularity { orbit: 1, .. })));
    }

    #[test]
    fn moment_form_examples() {
        let od = a1_orbits(&[(1, 1), (1, 1), (3, 2)]);
        let ws = weyl_elements(&od.rs);
        // identity tuple: coefficient Σξ = 7/2 under the coroot-normalized
        // pairing
        let id = fixed_point_moment(&od, &[&ws[0], &ws[0], &ws[0]]);
        assert_eq!(id, LinearForm::new(vec![rat(7, 2)]));
        // (−,+,+): −1+1+3/2 = 3/2
        let m = fixed_point_moment(&od, &[&ws[1], &ws[0], &ws[0]]);
        assert_eq!(m, LinearForm::new(vec![rat(3, 2)]));
        // all reflections: negative of identity tuple
        let neg = fixed_point_moment(&od, &[&ws[1], &ws[1], &ws[1]]);
        assert_eq!(neg, LinearForm::new(vec![rat(-7, 2)]));
    }

    #[test]
    fn restrict_class_modes() {
        let rs = build_root_system('A', 1).unwrap();
        let ws = weyl_elements(&rs);
        let b = LinearForm::from_ints(&[1]);
        let zeta_lit = ClassSpec::new(
            vec![ClassFactor {
                orbit: 1,
                weight: b.clone(),
                power: 1,
            }],
            RestrictionMode::Literal,
        )
        .unwrap();
        let zeta_tw = ClassSpec::new(
            vec![ClassFactor {
                orbit: 1,
                weight: b.clone(),
                power: 1,
            }],
            RestrictionMode::WeylTwisted,
        )
        .unwrap();

        let one = restrict_class(&ClassSpec::one(), &[&ws[0], &ws[0], &ws[0]], 1).unwrap();
        assert_eq!(one, MultiPoly::one(1));

        let id3 = [&ws[0], &ws[0], &ws[0]];
        assert_eq!(
            restrict_class(&zeta_lit, &id3, 1).unwrap(),
            restrict_class(&zeta_tw, &id3, 1).unwrap()
        );

        // reflection in slot 1, twisted mode: −B(X)
        let s3 = [&ws[1], &ws[0], &ws[0]];
        let twisted = restrict_class(&zeta_tw, &s3, 1).unwrap();
        assert_eq!(twisted, -&MultiPoly::from_linear(&b));
        // literal mode ignores the tuple
        assert_eq!(
            restrict_class(&zeta_lit, &s3, 1).unwrap(),
            MultiPoly::from_linear(&b)
        );
    }

    #[test]
    fn restrict_class_index_range() {
        let rs = build_root_system('A', 1).unwrap();
        let ws = weyl_elements(&rs);
        let zeta = ClassSpec::new(
            vec![ClassFactor {
                orbit: 4,
                weight: LinearForm::from_ints(&[1]),
                power: 1,
            }],
            RestrictionMode::Literal,
        )
        .unwrap();
        assert!(matches!(
            restrict_class(&zeta, &[&ws[0], &ws[0], &ws[0]], 1),
            Err(Error::IndexOutOfRange { index: 4, n: 3 })
        ));
    }

    #[test]
    fn integrand_shapes() {
        let od = a1_orbits(&[(1, 1), (1, 1), (3, 2)]);
        let terms = assemble_integrand(&od, &ClassSpec::one()).unwrap();
        assert_eq!(terms.len(), 8);
        for t in &terms {
            assert_eq!(t.denominators, vec![(LinearForm::from_ints(&[2]), 1)]);
        }

        let od4 = a1_orbits(&[(1, 1), (1, 1), (1, 1), (3, 2)]);
        let terms4 = assemble_integrand(&od4, &ClassSpec::one()).unwrap();
        assert_eq!(terms4.len(), 16);
        for t in &terms4 {
            assert_eq!(t.denominators, vec![(LinearForm::from_ints(&[2]), 2)]);
        }

        let rs = build_root_system('A', 2).unwrap();
        let od2 = OrbitData::new(
            rs,
            vec![
                vec![rat(1, 1), rat(1, 1)],
                vec![rat(1, 1), rat(1, 1)],
                vec![rat(3, 2), rat(1, 1)],
            ],
        )
        .unwrap();
        let terms2 = assemble_integrand(&od2, &ClassSpec::one()).unwrap();
        assert_eq!(terms2.len(), 216);
        let denom_degree: u32 = terms2[0].denominators.iter().map(|(_, m)| m).sum();
        assert_eq!(denom_degree, 3);
    }

    #[test]
    fn raw_matches_brute_force_a1_n3() {
        // raw = ½·Σ sgn·[λ>0] = −1 for ξ = (1,1,3/2); the brute-force
        // enumeration is the independent oracle.
        let od = a1_orbits(&[(1, 1), (1, 1), (3, 2)]);
        let (raw, contributing) =
            raw_pairing(&od, &ClassSpec::one(), &ResidueConfig::descending(1)).unwrap();
        assert_eq!(raw, GaussianRational::from_int(-1));
        let oracle = brute_force_sign_sum(&[rat(1, 1), rat(1, 1), rat(3, 2)], 0).unwrap();
        assert_eq!(raw.re, oracle / rat(2, 1));
        assert_eq!(contributing, 4);
    }

    #[test]
    fn raw_matches_brute_force_a1_n4() {
        // raw = (i/4)·Σ sgn·λ·[λ>0] = −3i/4 for ξ = (1,1,1,3/2)
        let od = a1_orbits(&[(1, 1), (1, 1), (1, 1), (3, 2)]);
        let (raw, _) = raw_pairing(&od, &ClassSpec::one(), &ResidueConfig::descending(1)).unwrap();
        assert_eq!(raw, GaussianRational::new(rat(0, 1), rat(-3, 4)));
        let oracle =
            brute_force_sign_sum(&[rat(1, 1), rat(1, 1), rat(1, 1), rat(3, 2)], 1).unwrap();
        assert_eq!(raw.im, oracle / rat(4, 1));
    }

    #[test]
    fn weyl_normalization_makes_pairing_orbit_invariant() {
        // the A1 reflection sends ξ_j to −ξ_j without changing the orbit
        let od = a1_orbits(&[(1, 1), (1, 1), (3, 2)]);
        let od_flipped = a1_orbits(&[(1, 1), (-1, 1), (3, 2)]);
        let cfg = ResidueConfig::descending(1);
        assert_eq!(
            raw_pairing(&od, &ClassSpec::one(), &cfg).unwrap().0,
            raw_pairing(&od_flipped, &ClassSpec::one(), &cfg).unwrap().0,
        );
    }

    #[test]
    fn non_generic_input_is_rejected() {
        let od = a1_orbits(&[(1, 1), (1, 1), (2, 1)]);
        assert!(matches!(
            raw_pairing(&od, &ClassSpec::one(), &ResidueConfig::descending(1)),
            Err(Error::NonGeneric(_))
        ));
    }

    #[test]
    fn orbit_data_validation() {
        let rs = build_root_system('A', 1).unwrap();
        assert!(OrbitData::new(rs.clone(), vec![vec![rat(1, 1)]; 2]).is_err());
        assert!(OrbitData::new(rs, vec![vec![rat(1, 1), rat(2, 1)]; 3]).is_err());
    }

    #[test]
    fn class_spec_validation() {
        let b = LinearForm::from_ints(&[1]);
        assert!(ClassSpec::new(
            vec![ClassFactor {
                orbit: 1,
                weight: b.clone(),
                power: 0
            }],
            RestrictionMode::Literal,
        )
        .is_err());
        let half = LinearForm::new(vec![rat(1, 2)]);
        assert!(ClassSpec::new(
            vec![ClassFactor {
                orbit: 1,
                weight: half,
                power: 1
            }],
            RestrictionMode::Literal,
        )
        .is_err());
        let ok = ClassSpec::new(
            vec![ClassFactor {
                orbit: 2,
                weight: b,
                power: 3,
            }],
            RestrictionMode::WeylTwisted,
        )
        .unwrap();
        assert_eq!(ok.degree(), 6);
        assert_eq!(ClassSpec::one().degree(), 0);
    }

    fn frozen_calibration() -> crate::calib::Calibration {
        let mut cal = crate::calib::Calibration::empty();
        cal.insert("A1".into(), &rat(-1, 64), &rat(4, 1));
        cal.insert("A2".into(), &rat(-1, 1), &rat(1, 1));
        cal
    }

    #[test]
    fn calibrated_point_count_and_volume() {
        let cal = frozen_calibration();
        let od = a1_orbits(&[(1, 1), (1, 1), (3, 2)]);
        let res = pairing(&od, &ClassSpec::one(), &cal).unwrap();
        assert_eq!(res.value, GaussianRational::one());
        assert_eq!(res.dim_reduced, 0);
        assert_eq!(
            intersection_number(&od, &ClassSpec::one(), &cal).unwrap(),
            rat(1, 1)
        );

        // N=4 anchor: volume = C(4)·raw/i = (−4)(−3/4) = 3
        let od4 = a1_orbits(&[(1, 1), (1, 1), (1, 1), (3, 2)]);
        assert_eq!(liouville_volume(&od4, &cal).unwrap(), rat(3, 1));

        // permutation of ξ leaves the volume unchanged
        let od4p = a1_orbits(&[(3, 2), (1, 1), (1, 1), (1, 1)]);
        assert_eq!(liouville_volume(&od4p, &cal).unwrap(), rat(3, 1));

        // 0 outside the moment polytope
        let od_out = a1_orbits(&[(1, 1), (1, 1), (1, 1), (10, 1)]);
        assert_eq!(liouville_volume(&od_out, &cal).unwrap(), rat(0, 1));
    }

    #[test]
    fn degree_exceeding_dimension_vanishes() {
        let cal = frozen_calibration();
        let od = a1_orbits(&[(1, 1), (1, 1), (3, 2)]);
        let zeta = ClassSpec::new(
            vec![ClassFactor {
                orbit: 1,
                weight: LinearForm::from_ints(&[1]),
                power: 1,
            }],
            RestrictionMode::WeylTwisted,
        )
        .unwrap();
        let res = pairing(&od, &zeta, &cal).unwrap();
        assert!(res.value.is_zero());

        // and the strict pairing entry point refuses the degree mismatch
        assert!(matches!(
            intersection_number(&od, &zeta, &cal),
            Err(Error::DegreeMismatch {
                degree: 2,
                dim_reduced: 0
            })
        ));
    }

    #[test]
    fn modes_agree_for_trivial_class() {
        let od = a1_orbits(&[(1, 1), (5, 4), (7, 8), (3, 2)]);
        let cfg = ResidueConfig::descending(1);
        let mut lit = ClassSpec::one();
        lit.restriction_mode = RestrictionMode::Literal;
        let a = raw_pairing(&od, &ClassSpec::one(), &cfg).unwrap().0;
        let b = raw_pairing(&od, &lit, &cfg).unwrap().0;
        assert_eq!(a, b);
    }

    #[test]
    fn missing_calibration_is_loud() {
        let cal = crate::calib::Calibration::empty();
        let od = a1_orbits(&[(1, 1), (1, 1), (3, 2)]);
        assert!(matches!(
            pairing(&od, &ClassSpec::one(), &cal),
            Err(Error::CalibrationMissing { .. })
        ));
    }

    #[test]
    fn volume_is_piecewise_linear_for_n4() {
        // with (1,1,1,t) the volume on each chamber is a degree ≤ 1
        // polynomial in t; fit two points, predict the rest exactly
        let cal = frozen_calibration();
        let samples = |ts: &[(i64, i64)]| -> Vec<(Rat, Rat)> {
            ts.iter()
                .map(|&(n, d)| {
                    let t = rat(n, d);
                    let od = a1_orbits(&[(1, 1), (1, 1), (1, 1), (n, d)]);
                    (t, liouville_volume(&od, &cal).unwrap())
                })
                .collect()
        };
        for chamber in [
            samples(&[(1, 4), (1, 2), (3, 4), (5, 8)]),
            samples(&[(5, 4), (3, 2), (7, 4), (5, 2)]),
        ] {
            let (t0, v0) = &chamber[0];
            let (t1, v1) = &chamber[1];
            let slope = (v1 - v0) / (t1 - t0);
            for (t, v) in &chamber {
                assert_eq!(v, &(v0 + &(&slope * &(t - t0))));
            }
        }
    }

    #[test]
    fn multiple_factors_per_orbit_allowed() {
        let rs = build_root_system('A', 2).unwrap();
        let od = OrbitData::new(
            rs,
            vec![
                vec![rat(23, 4), rat(27, 4)],
                vec![rat(75, 16), rat(19, 4)],
                vec![rat(61, 8), rat(69, 8)],
            ],
        )
        .unwrap();
        let zeta = ClassSpec::new(
            vec![
                ClassFactor {
                    orbit: 1,
                    weight: LinearForm::from_ints(&[1, 0]),
                    power: 1,
                },
                ClassFactor {
                    orbit: 1,
                    weight: LinearForm::from_ints(&[0, 1]),
                    power: 1,
                },
            ],
            RestrictionMode::WeylTwisted,
        )
        .unwrap();
        assert_eq!(zeta.degree(), 4);
        // degree 4 on the 2-dimensional space: forced to vanish
        let (raw, _) = raw_pairing(&od, &zeta, &ResidueConfig::descending(2)).unwrap();
        assert!(raw.is_zero());
    }
}

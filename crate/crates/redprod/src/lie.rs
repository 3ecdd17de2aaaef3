//! Root-system data, Weyl-group enumeration and action, signs, and the
//! anti-invariant positive-root product ϖ.
//!
//! Coordinates on 𝔱 are the simple-coroot basis throughout, so Weyl matrices
//! are integral and the Cartan pairing is exactly rational. Roots are stored
//! as linear forms via the symmetrized Cartan matrix; with this convention
//! long roots have squared length 2 under the pairing. The normalization only
//! moves the pairing module's calibration constant.

use std::collections::HashSet;

use num_traits::{One, Signed, Zero};

use crate::algebra::{LinearForm, MultiPoly, Rat};
use crate::error::{Error, Result};

/// Cartan data for a compact simple group type. Type A (rank ≥ 1) is
/// supported; the interface leaves room for other series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystem {
    pub series: char,
    pub rank: usize,
    pub positive_roots: Vec<LinearForm>,
    pub simple_roots: Vec<LinearForm>,
    /// Symmetric bilinear form on coroot coordinates (the symmetrized Cartan
    /// matrix).
    pub cartan_pairing: Vec<Vec<Rat>>,
    pub dim_g: usize,
    pub dim_t: usize,
}

/// One Weyl-group element acting on coroot coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElement {
    pub matrix: Vec<Vec<Rat>>,
    pub sign: i8,
}

pub fn build_root_system(series: char, rank: usize) -> Result<RootSystem> {
    if series != 'A' || rank == 0 {
        return Err(Error::UnsupportedType { series, rank });
    }
    let r = rank;
    // Cartan matrix of A_r: 2 on the diagonal, -1 between neighbours.
    let cartan: Vec<Vec<Rat>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    let v: i64 = if i == j {
                        2
                    } else if i.abs_diff(j) == 1 {
                        -1
                    } else {
                        0
                    };
                    Rat::from_integer(v.into())
                })
                .collect()
        })
        .collect();

    // Simple root α_i as a form: α_i(α_j^∨) = C_ij, so its coefficients are
    // row i of the Cartan matrix.
    let simple_roots: Vec<LinearForm> =
        (0..r).map(|i| LinearForm::new(cartan[i].clone())).collect();

    // Positive roots of A_r are α_i + ... + α_j for i ≤ j.
    let mut positive_roots = Vec::new();
    for i in 0..r {
        let mut acc = LinearForm::zero(r);
        for root in simple_roots.iter().take(r).skip(i) {
            acc = &acc + root;
            positive_roots.push(acc.clone());
        }
    }
    // Sort within each starting index we already pushed in (i, j) order; keep
    // deterministic ordering by construction.

    let dim_t = r;
    let dim_g = (r + 1) * (r + 1) - 1;
    debug_assert_eq!(positive_roots.len(), (dim_g - dim_t) / 2);

    Ok(RootSystem {
        series,
        rank,
        positive_roots,
        simple_roots,
        cartan_pairing: cartan,
        dim_g,
        dim_t,
    })
}

impl RootSystem {
    /// Matrix of the i-th simple reflection on coroot coordinates:
    /// s_i(α_j^∨) = α_j^∨ − C_ij α_i^∨.
    pub fn simple_reflection(&self, i: usize) -> WeylElement {
        let mut m = identity_matrix(self.rank);
        for (entry, c) in m[i].iter_mut().zip(&self.cartan_pairing[i]) {
            *entry -= c;
        }
        WeylElement {
            matrix: m,
            sign: -1,
        }
    }

    /// Pairing of two coordinate vectors: uᵀ C v.
    pub fn pairing(&self, u: &[Rat], v: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (i, ui) in u.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                acc += ui * &self.cartan_pairing[i][j] * vj;
            }
        }
        acc
    }

    /// ⟨γ, v⟩ ≠ 0 for every positive root γ.
    pub fn is_regular(&self, v: &[Rat]) -> bool {
        self.positive_roots.iter().all(|g| !g.eval(v).is_zero())
    }

    /// v is (weakly) dominant: every simple root is ≥ 0 on it.
    pub fn is_dominant(&self, v: &[Rat]) -> bool {
        self.simple_roots.iter().all(|a| !a.eval(v).is_negative())
    }

    /// The dominant representative of the Weyl orbit of v.
    pub fn dominant_representative(&self, v: &[Rat]) -> Vec<Rat> {
        let mut cur = v.to_vec();
        'outer: loop {
            for (i, alpha) in self.simple_roots.iter().enumerate() {
                if alpha.eval(&cur).is_negative() {
                    cur = mat_vec(&self.simple_reflection(i).matrix, &cur);
                    continue 'outer;
                }
            }
            return cur;
        }
    }
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        Self {
            matrix: identity_matrix(rank),
            sign: 1,
        }
    }

    pub fn compose(&self, rhs: &WeylElement) -> WeylElement {
        WeylElement {
            matrix: mat_mul(&self.matrix, &rhs.matrix),
            sign: self.sign * rhs.sign,
        }
    }

    pub fn inverse(&self) -> WeylElement {
        WeylElement {
            matrix: mat_inverse(&self.matrix).expect("Weyl matrices are invertible"),
            sign: self.sign,
        }
    }

    pub fn is_identity(&self) -> bool {
        let n = self.matrix.len();
        self.matrix == identity_matrix(n)
    }
}

/// Full Weyl group by breadth-first closure over the simple reflections.
/// The identity comes first and the order is deterministic.
pub fn weyl_elements(rs: &RootSystem) -> Vec<WeylElement> {
    let gens: Vec<WeylElement> = (0..rs.rank).map(|i| rs.simple_reflection(i)).collect();
    let id = WeylElement::identity(rs.rank);
    let mut seen: HashSet<Vec<Rat>> = HashSet::new();
    seen.insert(flatten(&id.matrix));
    let mut out = vec![id];
    let mut frontier = 0;
    while frontier < out.len() {
        let current = out[frontier].clone();
        frontier += 1;
        for g in &gens {
            let next = current.compose(g);
            if seen.insert(flatten(&next.matrix)) {
                out.push(next);
            }
        }
    }
    out
}

/// Apply a Weyl element to a coordinate vector.
pub fn weyl_act(w: &WeylElement, v: &[Rat]) -> Result<Vec<Rat>> {
    if w.matrix.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: w.matrix.len(),
            got: v.len(),
        });
    }
    Ok(mat_vec(&w.matrix, v))
}

/// ϖ(X) = Π ⟨γ, X⟩ over the positive roots, as a homogeneous polynomial.
pub fn varpi(rs: &RootSystem) -> MultiPoly {
    rs.positive_roots
        .iter()
        .fold(MultiPoly::one(rs.rank), |acc, g| {
            &acc * &MultiPoly::from_linear(g)
        })
}

fn flatten(m: &[Vec<Rat>]) -> Vec<Rat> {
    m.iter().flatten().cloned().collect()
}

pub(crate) fn identity_matrix(n: usize) -> Vec<Vec<Rat>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                .collect()
        })
        .collect()
}

pub(crate) fn mat_vec(m: &[Vec<Rat>], v: &[Rat]) -> Vec<Rat> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .map(|(a, b)| a * b)
                .fold(Rat::zero(), |x, y| x + y)
        })
        .collect()
}

pub(crate) fn mat_mul(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let n = a.len();
    let mut out = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                let prod = &a[i][k] * &b[k][j];
                out[i][j] += prod;
            }
        }
    }
    out
}

/// Exact inverse by Gauss–Jordan elimination.
pub(crate) fn mat_inverse(m: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut inv = identity_matrix(n);
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] /= &p;
            inv[col][j] /= &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let s = &f * &a[col][j];
                a[r][j] -= s;
                let s = &f * &inv[col][j];
                inv[r][j] -= s;
            }
        }
    }
    Some(inv)
}

/// Exact determinant, used by the tests to verify the stored signs.
#[cfg(test)]
#[allow(clippy::needless_range_loop)]
pub(crate) fn mat_det(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut det = Rat::one();
    for col in 0..n {
        let pivot = match (col..n).find(|&r| !a[r][col].is_zero()) {
            Some(p) => p,
            None => return Rat::zero(),
        };
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        det *= &a[col][col].clone();
        let p = a[col][col].clone();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for j in col..n {
                let s = &f * &a[col][j];
                a[r][j] -= s;
            }
        }
    }
    det
}

//! Planes and their Plücker vectors.
//!
//! A k-plane in ℝⁿ is held either as a [`PlaneMatrix`] of spanning rows or as a decomposable
//! k-vector whose coefficients are the maximal minors of any spanning matrix.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exterior::{IndexSet, MultiVector};
use crate::linalg::{self, Row};
use crate::rational::{self, Rational};

/// Full-rank `k × n` matrix whose rows span a k-plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneMatrix {
    n: usize,
    rows: Vec<Row>,
}

impl PlaneMatrix {
    pub fn new(n: usize, rows: Vec<Row>) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::Validation(format!("row of length {} in a matrix with n = {n}", r.len())));
        }
        let rank = linalg::rank(&rows);
        if rank != rows.len() {
            return Err(Error::Rank { rank, expected: rows.len() });
        }
        Ok(PlaneMatrix { n, rows })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        let n = rows.first().map_or(0, |r| r.len());
        Self::new(n, rows.iter().map(|r| r.iter().map(|&x| rational::int(x)).collect()).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    /// Row `i` as a grade-1 multivector.
    pub fn row_vector(&self, i: usize) -> MultiVector {
        MultiVector::vector(&self.rows[i])
    }

    /// Left-multiplies by a square matrix (a change of basis when `g` is invertible).
    pub fn left_mul(&self, g: &[Row]) -> Result<Self> {
        let rows = g
            .iter()
            .map(|gr| {
                (0..self.n)
                    .map(|j| gr.iter().zip(&self.rows).fold(Rational::zero(), |acc, (a, r)| acc + a * &r[j]))
                    .collect()
            })
            .collect();
        Self::new(self.n, rows)
    }
}

impl Serialize for PlaneMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            rows: Vec<Vec<String>>,
        }
        Repr { rows: self.rows.iter().map(|r| r.iter().map(rational::format).collect()).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PlaneMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            rows: Vec<Vec<String>>,
        }
        let repr = Repr::deserialize(d)?;
        let rows = repr
            .rows
            .iter()
            .map(|r| r.iter().map(|x| rational::parse(x)).collect::<Result<Row>>())
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        let n = rows.first().map_or(0, Vec::len);
        PlaneMatrix::new(n, rows).map_err(serde::de::Error::custom)
    }
}

/// The k-vector of maximal minors of `m`.
pub fn plucker_of_matrix(m: &PlaneMatrix) -> MultiVector {
    let (n, k) = (m.n, m.k());
    let terms = IndexSet::all(n, k).map(|a| {
        let minor: Vec<Row> =
            m.rows.iter().map(|r| a.elements().iter().map(|&j| r[j - 1].clone()).collect()).collect();
        let d = linalg::det(&minor);
        (a, d)
    });
    MultiVector::from_terms(n, k, terms).expect("minors are well-formed")
}

/// Exact decomposability test: `(ι_{e_B} ω) ∧ ω = 0` for every `(k−1)`-subset `B`.
pub fn is_decomposable(omega: &MultiVector) -> Result<bool> {
    if omega.is_zero() {
        return Err(Error::Validation("decomposability of the zero element".into()));
    }
    let (n, k) = (omega.n(), omega.grade());
    if k <= 1 || k + 1 >= n {
        return Ok(true);
    }
    for b in IndexSet::all(n, k - 1) {
        let v = omega.contract_basis(&b)?;
        if v.is_zero() {
            continue;
        }
        if !v.wedge(omega)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Basis of `{v : v ∧ ω = 0}`, the plane of a decomposable ω.
fn annihilator(omega: &MultiVector) -> Result<Vec<Row>> {
    let (n, k) = (omega.n(), omega.grade());
    if k == n {
        return Ok((0..n).map(|i| linalg::unit(n, i)).collect());
    }
    let cols: Vec<Vec<Rational>> =
        (0..n).map(|i| MultiVector::vector(&linalg::unit(n, i)).wedge(omega).map(|w| w.to_dense())).collect::<Result<_>>()?;
    let nrows = cols.first().map_or(0, Vec::len);
    let rows: Vec<Row> = (0..nrows).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    Ok(linalg::nullspace(&rows, n))
}

/// Canonical reduced-row-echelon basis of the plane of a decomposable ω.
pub fn spanning_vectors(omega: &MultiVector) -> Result<PlaneMatrix> {
    if omega.is_zero() {
        return Err(Error::Validation("the zero element spans no plane".into()));
    }
    let basis = annihilator(omega)?;
    if basis.len() != omega.grade() {
        return Err(Error::NotDecomposable);
    }
    let (rows, _) = linalg::rref(&basis);
    PlaneMatrix::new(omega.n(), rows)
}

fn require_decomposable(w: &MultiVector) -> Result<()> {
    if w.is_zero() || !is_decomposable(w)? {
        return Err(Error::NotDecomposable);
    }
    Ok(())
}

/// Whether the plane of η lies inside the plane of ω.
pub fn contains(eta: &MultiVector, omega: &MultiVector) -> Result<bool> {
    if eta.n() != omega.n() {
        return Err(Error::AmbientMismatch(eta.n(), omega.n()));
    }
    if eta.grade() > omega.grade() {
        return Err(Error::Validation(format!(
            "containment of grade {} in grade {}",
            eta.grade(),
            omega.grade()
        )));
    }
    require_decomposable(eta)?;
    require_decomposable(omega)?;
    let big = spanning_vectors(omega)?;
    let small = spanning_vectors(eta)?;
    let mut stacked = big.rows.clone();
    stacked.extend(small.rows.iter().cloned());
    Ok(linalg::rank(&stacked) == omega.grade())
}

/// Same plane (equal grade and mutual containment).
pub fn same_plane(a: &MultiVector, b: &MultiVector) -> Result<bool> {
    Ok(a.grade() == b.grade() && contains(a, b)?)
}

/// Scalar convention for plane representatives: coefficient sum 1 when possible,
/// otherwise the first nonzero coefficient is +1.
pub fn canonical_representative(w: &MultiVector) -> MultiVector {
    if let Ok(nw) = w.normalize() {
        return nw;
    }
    match w.terms().next() {
        Some((_, c)) => w.scaled(&c.recip()),
        None => w.clone(),
    }
}

/// The Q-orthogonal complement of the plane of ω, where Q on ℝⁿ is
/// `Q(e_i, e_j) = (−1)^{i−1} δ_ij` (the grade-1 case of the complement pairing).
pub fn q_orthocomplement(omega: &MultiVector) -> Result<MultiVector> {
    let (n, k) = (omega.n(), omega.grade());
    if k >= n {
        return Err(Error::Validation("the complement of the whole space is the zero plane".into()));
    }
    require_decomposable(omega)?;
    let rows: Vec<Row> = if k == 0 {
        Vec::new()
    } else {
        spanning_vectors(omega)?
            .rows
            .iter()
            .map(|r| r.iter().enumerate().map(|(i, x)| if i % 2 == 1 { -x.clone() } else { x.clone() }).collect())
            .collect()
    };
    let kernel = linalg::nullspace(&rows, n);
    let m = PlaneMatrix::new(n, kernel)?;
    Ok(canonical_representative(&plucker_of_matrix(&m)))
}

/// Sign class of ω after flipping the overall sign if that makes the leading coefficient positive.
pub fn sign_up_to_scalar(w: &MultiVector) -> crate::exterior::SignClass {
    match w.terms().next() {
        Some((_, c)) if c.is_negative() => (-w).classify_sign(),
        _ => w.classify_sign(),
    }
}

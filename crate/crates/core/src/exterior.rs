//! Exact multilinear algebra on Λ^k(ℝⁿ) in the standard orthonormal basis.
//!
//! A [`MultiVector`] is a homogeneous element of grade `k`, stored as a sparse map from
//! basis index sets `A = {a₁ < … < a_k} ⊂ {1..n}` to exact rational coefficients.
//! Zero coefficients are never stored, so the key set is the support.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// A strictly increasing list of basis indices, 1-based.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    /// Builds an index set, sorting the input. Rejects repeats and zero.
    pub fn new(mut elems: Vec<usize>) -> Result<Self> {
        elems.sort_unstable();
        if elems.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Validation(format!("repeated index in {elems:?}")));
        }
        if elems.first() == Some(&0) {
            return Err(Error::Validation("indices are 1-based".into()));
        }
        Ok(IndexSet(elems))
    }

    pub fn empty() -> Self {
        IndexSet(Vec::new())
    }

    pub fn full(n: usize) -> Self {
        IndexSet((1..=n).collect())
    }

    pub fn elements(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// Complement within `{1..n}`.
    pub fn complement(&self, n: usize) -> IndexSet {
        IndexSet((1..=n).filter(|i| !self.contains(*i)).collect())
    }

    fn without(&self, i: usize) -> IndexSet {
        IndexSet(self.0.iter().copied().filter(|&x| x != i).collect())
    }

    /// All `k`-subsets of `{1..n}` in lexicographic order.
    pub fn all(n: usize, k: usize) -> impl Iterator<Item = IndexSet> {
        (1..=n).combinations(k).map(IndexSet)
    }

    fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(IndexSet::empty());
        }
        let elems = s
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad index set {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if elems.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parse(format!("index set {s:?} is not strictly ascending")));
        }
        IndexSet::new(elems)
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.iter().join(","))
    }
}

/// Sign of the permutation sorting the concatenation `a ++ b` of two disjoint sorted sets.
fn shuffle_sign(a: &IndexSet, b: &IndexSet) -> bool {
    // true = negative
    let mut inversions = 0usize;
    for &x in a.elements() {
        inversions += b.elements().iter().take_while(|&&y| y < x).count();
    }
    inversions % 2 == 1
}

/// Positivity classification of the full coefficient vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignClass {
    Zero,
    Positive,
    Nonnegative,
    Mixed,
}

impl SignClass {
    /// Positive or Nonnegative.
    pub fn is_nonnegative(self) -> bool {
        matches!(self, SignClass::Positive | SignClass::Nonnegative)
    }
}

impl fmt::Display for SignClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Homogeneous element of Λ^k(ℝⁿ) with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiVector {
    n: usize,
    k: usize,
    coeffs: BTreeMap<IndexSet, Rational>,
}

impl MultiVector {
    pub fn zero(n: usize, k: usize) -> Self {
        assert!(k <= n, "grade {k} exceeds ambient dimension {n}");
        MultiVector { n, k, coeffs: BTreeMap::new() }
    }

    /// Builds from `(index set, coefficient)` pairs; repeated keys are summed.
    pub fn from_terms<I>(n: usize, k: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (IndexSet, Rational)>,
    {
        if k > n {
            return Err(Error::GradeOverflow(k, 0, n));
        }
        let mut out = MultiVector::zero(n, k);
        for (a, c) in terms {
            if a.len() != k {
                return Err(Error::GradeMismatch { expected: k, found: a.len() });
            }
            if a.last().is_some_and(|m| m > n) {
                return Err(Error::Validation(format!("index set {a} exceeds n = {n}")));
            }
            out.accumulate(a, c);
        }
        Ok(out)
    }

    /// Convenience constructor from integer index lists.
    pub fn from_pairs(n: usize, k: usize, terms: &[(&[usize], Rational)]) -> Result<Self> {
        let terms = terms
            .iter()
            .map(|(a, c)| Ok((IndexSet::new(a.to_vec())?, c.clone())))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(n, k, terms)
    }

    /// Coefficients in lexicographic order of all `k`-subsets.
    pub fn from_dense(n: usize, k: usize, values: &[Rational]) -> Result<Self> {
        let subsets: Vec<_> = IndexSet::all(n, k).collect();
        if subsets.len() != values.len() {
            return Err(Error::Validation(format!(
                "expected {} coefficients for grade {k} in dimension {n}, got {}",
                subsets.len(),
                values.len()
            )));
        }
        Self::from_terms(n, k, subsets.into_iter().zip(values.iter().cloned()))
    }

    /// Basis element e_A.
    pub fn basis(n: usize, a: &[usize]) -> Result<Self> {
        let a = IndexSet::new(a.to_vec())?;
        Self::from_terms(n, a.len(), [(a, rational::one())])
    }

    /// Grade-1 element from its coordinate vector.
    pub fn vector(v: &[Rational]) -> Self {
        let n = v.len();
        let mut out = MultiVector::zero(n, 1);
        for (i, c) in v.iter().enumerate() {
            out.accumulate(IndexSet(vec![i + 1]), c.clone());
        }
        out
    }

    pub fn scalar(n: usize, c: Rational) -> Self {
        let mut out = MultiVector::zero(n, 0);
        out.accumulate(IndexSet::empty(), c);
        out
    }

    fn accumulate(&mut self, a: IndexSet, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(a) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grade(&self) -> usize {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, a: &IndexSet) -> Rational {
        self.coeffs.get(a).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeff_of(&self, a: &[usize]) -> Rational {
        IndexSet::new(a.to_vec()).map(|a| self.coeff(&a)).unwrap_or_else(|_| Rational::zero())
    }

    /// Nonzero terms in lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&IndexSet, &Rational)> {
        self.coeffs.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &IndexSet> {
        self.coeffs.keys()
    }

    /// Full coefficient vector in lexicographic basis order.
    pub fn to_dense(&self) -> Vec<Rational> {
        IndexSet::all(self.n, self.k).map(|a| self.coeff(&a)).collect()
    }

    pub fn to_dense_f64(&self) -> Vec<f64> {
        self.to_dense().iter().map(rational::to_f64).collect()
    }

    pub fn coefficient_sum(&self) -> Rational {
        self.coeffs.values().fold(Rational::zero(), |acc, c| acc + c)
    }

    pub fn scaled(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return MultiVector::zero(self.n, self.k);
        }
        MultiVector {
            n: self.n,
            k: self.k,
            coeffs: self.coeffs.iter().map(|(a, c)| (a.clone(), c * s)).collect(),
        }
    }

    fn check_same_space(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::AmbientMismatch(self.n, other.n));
        }
        if self.k != other.k {
            return Err(Error::GradeMismatch { expected: self.k, found: other.k });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other)?;
        let mut out = self.clone();
        for (a, c) in &other.coeffs {
            out.accumulate(a.clone(), c.clone());
        }
        Ok(out)
    }

    /// Exterior product.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::AmbientMismatch(self.n, other.n));
        }
        if self.k + other.k > self.n {
            return Err(Error::GradeOverflow(self.k, other.k, self.n));
        }
        let mut out = MultiVector::zero(self.n, self.k + other.k);
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                if b.elements().iter().any(|&j| a.contains(j)) {
                    continue;
                }
                let mut union: Vec<usize> = a.elements().iter().chain(b.elements()).copied().collect();
                union.sort_unstable();
                let prod = ca * cb;
                let term = if shuffle_sign(a, b) { -prod } else { prod };
                out.accumulate(IndexSet(union), term);
            }
        }
        Ok(out)
    }

    /// Wedge of a list of grade-1 elements, left to right.
    pub fn wedge_all(n: usize, factors: &[MultiVector]) -> Result<Self> {
        factors.iter().try_fold(MultiVector::scalar(n, rational::one()), |acc, f| acc.wedge(f))
    }

    /// Interior product with a vector: the adjoint of `v ∧ ·` for the standard inner product.
    pub fn contract(&self, v: &Self) -> Result<Self> {
        if self.n != v.n {
            return Err(Error::AmbientMismatch(self.n, v.n));
        }
        if v.k != 1 {
            return Err(Error::GradeMismatch { expected: 1, found: v.k });
        }
        if self.k == 0 {
            return Err(Error::Validation("cannot contract a grade-0 element".into()));
        }
        let mut out = MultiVector::zero(self.n, self.k - 1);
        for (a, ca) in &self.coeffs {
            for (vi, cv) in &v.coeffs {
                let i = vi.elements()[0];
                if let Ok(pos) = a.elements().binary_search(&i) {
                    let prod = ca * cv;
                    let term = if pos % 2 == 1 { -prod } else { prod };
                    out.accumulate(a.without(i), term);
                }
            }
        }
        Ok(out)
    }

    /// Iterated contraction by the basis vectors of `b`, last index first.
    pub fn contract_basis(&self, b: &IndexSet) -> Result<Self> {
        b.elements().iter().rev().try_fold(self.clone(), |acc, &i| {
            let mut e = MultiVector::zero(self.n, 1);
            e.accumulate(IndexSet(vec![i]), rational::one());
            acc.contract(&e)
        })
    }

    /// Standard inner product (the e_A are orthonormal).
    pub fn inner(&self, other: &Self) -> Result<Rational> {
        self.check_same_space(other)?;
        Ok(self
            .coeffs
            .iter()
            .filter_map(|(a, c)| other.coeffs.get(a).map(|d| c * d))
            .fold(Rational::zero(), |acc, x| acc + x))
    }

    /// Rescales so the coefficients sum to one.
    pub fn normalize(&self) -> Result<Self> {
        let s = self.coefficient_sum();
        if s.is_zero() {
            return Err(Error::Normalization);
        }
        Ok(self.scaled(&s.recip()))
    }

    pub fn is_normalized(&self) -> bool {
        self.coefficient_sum().is_one()
    }

    pub fn classify_sign(&self) -> SignClass {
        if self.coeffs.is_empty() {
            return SignClass::Zero;
        }
        if self.coeffs.values().any(|c| c.is_negative()) {
            return SignClass::Mixed;
        }
        if self.coeffs.len() == binomial(self.n, self.k) {
            SignClass::Positive
        } else {
            SignClass::Nonnegative
        }
    }

    /// Maps e_A to e_{A∁}, coefficient for coefficient.
    pub fn complement(&self) -> Self {
        MultiVector {
            n: self.n,
            k: self.n - self.k,
            coeffs: self.coeffs.iter().map(|(a, c)| (a.complement(self.n), c.clone())).collect(),
        }
    }

    /// The pairing Q with `self ∧ other∁ = Q(self, other) e_{1..n}`.
    pub fn q_form(&self, other: &Self) -> Result<Rational> {
        self.check_same_space(other)?;
        let top = self.wedge(&other.complement())?;
        Ok(top.coeff(&IndexSet::full(self.n)))
    }

    /// True when no supported index set contains 1.
    pub fn avoids_first(&self) -> bool {
        self.coeffs.keys().all(|a| !a.contains(1))
    }

    /// Reads an element supported on e₂..eₙ as an element of Λ^k(ℝ^{n−1}), shifting indices down.
    pub fn drop_first(&self) -> Result<Self> {
        if !self.avoids_first() {
            return Err(Error::Validation("element involves e1".into()));
        }
        if self.k > self.n - 1 {
            return Err(Error::GradeOverflow(self.k, 0, self.n - 1));
        }
        Ok(MultiVector {
            n: self.n - 1,
            k: self.k,
            coeffs: self
                .coeffs
                .iter()
                .map(|(a, c)| (IndexSet(a.elements().iter().map(|i| i - 1).collect()), c.clone()))
                .collect(),
        })
    }

    /// Inverse of [`MultiVector::drop_first`]: embeds into ℝ^{n+1} on e₂..e_{n+1}.
    pub fn lift_first(&self) -> Self {
        MultiVector {
            n: self.n + 1,
            k: self.k,
            coeffs: self
                .coeffs
                .iter()
                .map(|(a, c)| (IndexSet(a.elements().iter().map(|i| i + 1).collect()), c.clone()))
                .collect(),
        }
    }

    /// Splits into the parts whose index sets do / do not contain `i`.
    pub fn split_on(&self, i: usize) -> (Self, Self) {
        let mut with = MultiVector::zero(self.n, self.k);
        let mut without = MultiVector::zero(self.n, self.k);
        for (a, c) in &self.coeffs {
            if a.contains(i) {
                with.coeffs.insert(a.clone(), c.clone());
            } else {
                without.coeffs.insert(a.clone(), c.clone());
            }
        }
        (with, without)
    }
}

impl Add for &MultiVector {
    type Output = MultiVector;
    fn add(self, rhs: &MultiVector) -> MultiVector {
        self.try_add(rhs).expect("adding multivectors of different shape")
    }
}

impl Neg for &MultiVector {
    type Output = MultiVector;
    fn neg(self) -> MultiVector {
        self.scaled(&-rational::one())
    }
}

impl Sub for &MultiVector {
    type Output = MultiVector;
    fn sub(self, rhs: &MultiVector) -> MultiVector {
        self + &(-rhs)
    }
}

impl fmt::Display for MultiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts = self.coeffs.iter().map(|(a, c)| format!("({c})e[{a}]"));
        write!(f, "{}", parts.format(" + "))
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

impl Serialize for MultiVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Coeffs<'a>(&'a BTreeMap<IndexSet, Rational>);
        impl Serialize for Coeffs<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.len()))?;
                for (a, c) in self.0 {
                    map.serialize_entry(&a.to_string(), &rational::format(c))?;
                }
                map.end()
            }
        }
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("MultiVector", 3)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("coeffs", &Coeffs(&self.coeffs))?;
        st.end()
    }
}

#[derive(Deserialize)]
struct MultiVectorRepr {
    n: usize,
    k: usize,
    coeffs: BTreeMap<String, String>,
}

impl<'de> Deserialize<'de> for MultiVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = MultiVectorRepr::deserialize(deserializer)?;
        let terms = repr
            .coeffs
            .iter()
            .map(|(a, c)| Ok((IndexSet::parse(a)?, rational::parse(c)?)))
            .collect::<Result<Vec<_>>>()
            .map_err(de::Error::custom)?;
        MultiVector::from_terms(repr.n, repr.k, terms).map_err(de::Error::custom)
    }
}

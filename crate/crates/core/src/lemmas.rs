//! Constructive containment: shrink a nonnegative decomposable k-vector to a contained
//! (k−1)-vector, or extend it to a containing (k+1)-vector, keeping the sign class.
//!
//! The strictly positive variants are recursive and depend on a small parameter ε. It is found
//! by a deterministic geometric search: start at `initial`, multiply by `shrink_factor` until the
//! exact sign test reports `Positive`.

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::exterior::{MultiVector, SignClass};
use crate::plucker::{self, PlaneMatrix};
use crate::rational::{self, Rational};

/// Schedule for the ε search.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsilonSearch {
    pub initial: Rational,
    pub shrink_factor: Rational,
    pub max_iterations: usize,
}

impl Default for EpsilonSearch {
    fn default() -> Self {
        EpsilonSearch { initial: rational::frac(1, 2), shrink_factor: rational::frac(1, 2), max_iterations: 64 }
    }
}

impl EpsilonSearch {
    pub fn validate(&self) -> Result<()> {
        if !self.initial.is_positive() || self.initial > Rational::one() {
            return Err(Error::Validation("epsilon initial value must lie in (0, 1]".into()));
        }
        if !self.shrink_factor.is_positive() || self.shrink_factor >= Rational::one() {
            return Err(Error::Validation("epsilon shrink factor must lie in (0, 1)".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::Validation("epsilon search needs at least one iteration".into()));
        }
        Ok(())
    }

    /// Returns the first candidate of the schedule for which `build` is `Positive`,
    /// together with the ε used and the 1-based iteration count.
    fn run<F>(&self, mut build: F) -> Result<(MultiVector, Rational, usize)>
    where
        F: FnMut(&Rational) -> Result<MultiVector>,
    {
        let mut eps = self.initial.clone();
        for it in 1..=self.max_iterations {
            let eta = build(&eps)?;
            if eta.classify_sign() == SignClass::Positive {
                return Ok((eta, eps, it));
            }
            eps *= &self.shrink_factor;
        }
        Err(Error::EpsilonExhausted(self.max_iterations))
    }
}

/// A containment witness and the ε bookkeeping that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    /// Normalized output.
    pub eta: MultiVector,
    /// ε chosen at the outermost level, if a search ran there.
    pub epsilon: Option<Rational>,
    /// Largest iteration count of any ε search in the recursion.
    pub max_iterations: usize,
}

impl Witness {
    fn plain(eta: MultiVector) -> Self {
        Witness { eta, epsilon: None, max_iterations: 0 }
    }
}

/// Configured entry point for the four constructions.
#[derive(Clone, Debug)]
pub struct Lemmas {
    pub epsilon: EpsilonSearch,
    /// Check decomposability, sign class and normalization of every input.
    pub validate: bool,
}

impl Default for Lemmas {
    fn default() -> Self {
        Lemmas { epsilon: EpsilonSearch::default(), validate: true }
    }
}

fn check_input(omega: &MultiVector, positive: bool) -> Result<()> {
    let sign = omega.classify_sign();
    if positive && sign != SignClass::Positive {
        return Err(Error::Validation(format!("expected a positive element, got {sign}")));
    }
    if !sign.is_nonnegative() {
        return Err(Error::Validation(format!("expected a nonnegative element, got {sign}")));
    }
    if !omega.is_normalized() {
        return Err(Error::Validation("element is not normalized".into()));
    }
    if !plucker::is_decomposable(omega)? {
        return Err(Error::NotDecomposable);
    }
    Ok(())
}

/// `(sign) v` with the sign chosen so that `v ∧ inner` is a positive multiple of `target`.
/// `v` runs over `candidates`; the first one with `v ∧ inner ≠ 0` is used.
fn oriented_completion(candidates: &PlaneMatrix, inner: &MultiVector, target: &MultiVector) -> Result<MultiVector> {
    for i in 0..candidates.k() {
        let v = candidates.row_vector(i);
        let x = v.wedge(inner)?;
        let Some((a, c)) = x.terms().next() else { continue };
        let ratio = c / target.coeff(a);
        return Ok(if ratio.is_negative() { -&v } else { v });
    }
    Err(Error::Containment("no spanning vector completes the inner plane".into()))
}

impl Lemmas {
    pub fn new(epsilon: EpsilonSearch, validate: bool) -> Result<Self> {
        epsilon.validate()?;
        Ok(Lemmas { epsilon, validate })
    }

    /// Nonnegative (k−1)-vector contained in a nonnegative decomposable ω.
    ///
    /// With `j` the first index appearing in the support, row reduction gives
    /// `ω ∝ (e_j + v₁) ∧ v₂ ∧ ⋯ ∧ v_k` and the witness is `v₂ ∧ ⋯ ∧ v_k`.
    pub fn shrink_nonneg(&self, omega: &MultiVector) -> Result<Witness> {
        if omega.grade() == 0 {
            return Err(Error::Validation("cannot shrink a grade-0 element".into()));
        }
        if self.validate {
            check_input(omega, false)?;
        }
        let rows = plucker::spanning_vectors(omega)?;
        let rest = PlaneMatrix::new(omega.n(), rows.rows()[1..].to_vec())?;
        Ok(Witness::plain(plucker::plucker_of_matrix(&rest).normalize()?))
    }

    /// Positive (k−1)-vector contained in a positive decomposable ω.
    pub fn shrink_positive(&self, omega: &MultiVector) -> Result<Witness> {
        if omega.grade() == 0 {
            return Err(Error::Validation("cannot shrink a grade-0 element".into()));
        }
        if self.validate {
            check_input(omega, true)?;
        }
        let (eta, eps, iters) = self.shrink_positive_rec(omega)?;
        Ok(Witness { eta: eta.normalize()?, epsilon: eps, max_iterations: iters })
    }

    fn shrink_positive_rec(&self, omega: &MultiVector) -> Result<(MultiVector, Option<Rational>, usize)> {
        let (n, k) = (omega.n(), omega.grade());
        if k == 1 {
            return Ok((MultiVector::scalar(n, rational::one()), None, 0));
        }
        // Positive ω has pivot columns 1..k, so the first row is e₁ + v₁ and the others avoid e₁.
        let rows = plucker::spanning_vectors(omega)?;
        let first = rows.row_vector(0);
        if k == 2 {
            let v2 = rows.row_vector(1);
            let (eta, eps, it) = self.epsilon.run(|eps| Ok(&first.scaled(eps) + &v2))?;
            return Ok((eta, Some(eps), it));
        }
        let tail = MultiVector::wedge_all(n, &(1..k).map(|i| rows.row_vector(i)).collect::<Vec<_>>())?;
        let (inner, _, inner_iters) = self.shrink_positive_rec(&tail.drop_first()?.normalize()?)?;
        let inner = inner.lift_first();
        // w₃ ∧ ⋯ ∧ w_k spans the recursive witness; w₂ completes it to the tail plane.
        let w = plucker::spanning_vectors(&inner)?;
        let w_rest: Vec<MultiVector> = (0..w.k()).map(|i| w.row_vector(i)).collect();
        let w_inner = MultiVector::wedge_all(n, &w_rest)?;
        let tail_rows = PlaneMatrix::new(n, rows.rows()[1..].to_vec())?;
        let w2 = oriented_completion(&tail_rows, &w_inner, &tail)?;
        let w3 = &w_rest[0];
        let trailing = MultiVector::wedge_all(n, &w_rest[1..])?;
        let (eta, eps, it) = self.epsilon.run(|eps| {
            let a = &w2.scaled(eps) + w3;
            let b = &first.scaled(&-(eps * eps)) + w3;
            a.wedge(&b)?.wedge(&trailing)
        })?;
        Ok((eta, Some(eps), it.max(inner_iters)))
    }

    /// Nonnegative (k+1)-vector containing a nonnegative decomposable ω: `(−1)^{j−1} e_j ∧ ω`,
    /// where `j` is the first index missing from some supported index set.
    pub fn extend_nonneg(&self, omega: &MultiVector) -> Result<Witness> {
        let (n, k) = (omega.n(), omega.grade());
        if k >= n {
            return Err(Error::Validation("cannot extend a top-grade element".into()));
        }
        if self.validate {
            check_input(omega, false)?;
        }
        let j = (1..=n)
            .find(|&j| omega.support().any(|a| !a.contains(j)))
            .ok_or_else(|| Error::Validation("zero element".into()))?;
        let ej = MultiVector::basis(n, &[j])?;
        let mut eta = ej.wedge(omega)?;
        if j % 2 == 0 {
            eta = -&eta;
        }
        Ok(Witness::plain(eta.normalize()?))
    }

    /// Positive (k+1)-vector containing a positive decomposable ω, by induction on n.
    pub fn extend_positive(&self, omega: &MultiVector) -> Result<Witness> {
        let (n, k) = (omega.n(), omega.grade());
        if k >= n {
            return Err(Error::Validation("cannot extend a top-grade element".into()));
        }
        if self.validate {
            check_input(omega, true)?;
        }
        let (eta, eps, iters) = self.extend_positive_rec(omega)?;
        Ok(Witness { eta: eta.normalize()?, epsilon: eps, max_iterations: iters })
    }

    fn extend_positive_rec(&self, omega: &MultiVector) -> Result<(MultiVector, Option<Rational>, usize)> {
        let (n, k) = (omega.n(), omega.grade());
        if k + 1 == n {
            return Ok((MultiVector::basis(n, &(1..=n).collect::<Vec<_>>())?, None, 0));
        }
        let (_, without_first) = omega.split_on(1);
        let (mu, _, inner_iters) = self.extend_positive_rec(&without_first.drop_first()?.normalize()?)?;
        let mu = mu.lift_first();
        let v = oriented_completion(&plucker::spanning_vectors(&mu)?, &without_first, &mu)?;
        let e1 = MultiVector::basis(n, &[1])?;
        let (eta, eps, it) = self.epsilon.run(|eps| (&e1 + &v.scaled(eps)).wedge(omega))?;
        Ok((eta, Some(eps), it.max(inner_iters)))
    }
}

pub fn shrink_nonneg(omega: &MultiVector) -> Result<MultiVector> {
    Lemmas::default().shrink_nonneg(omega).map(|w| w.eta)
}

pub fn shrink_positive(omega: &MultiVector, cfg: &EpsilonSearch) -> Result<MultiVector> {
    Lemmas::new(cfg.clone(), true)?.shrink_positive(omega).map(|w| w.eta)
}

pub fn extend_nonneg(omega: &MultiVector) -> Result<MultiVector> {
    Lemmas::default().extend_nonneg(omega).map(|w| w.eta)
}

pub fn extend_positive(omega: &MultiVector, cfg: &EpsilonSearch) -> Result<MultiVector> {
    Lemmas::new(cfg.clone(), true)?.extend_positive(omega).map(|w| w.eta)
}

/// Shrinks repeatedly down to grade 1, returning every intermediate witness.
pub fn shrink_chain(omega: &MultiVector, lemmas: &Lemmas, positive: bool) -> Result<Vec<MultiVector>> {
    let mut out = Vec::new();
    let mut cur = omega.clone();
    while cur.grade() > 1 {
        cur = if positive { lemmas.shrink_positive(&cur)?.eta } else { lemmas.shrink_nonneg(&cur)?.eta };
        out.push(cur.clone());
    }
    Ok(out)
}

/// Extends repeatedly up to grade n−1, returning every intermediate witness.
pub fn extend_chain(omega: &MultiVector, lemmas: &Lemmas, positive: bool) -> Result<Vec<MultiVector>> {
    let mut out = Vec::new();
    let mut cur = omega.clone();
    while cur.grade() + 1 < cur.n() {
        cur = if positive { lemmas.extend_positive(&cur)?.eta } else { lemmas.extend_nonneg(&cur)?.eta };
        out.push(cur.clone());
    }
    Ok(out)
}

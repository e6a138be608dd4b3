//! Chamber coordinates `ρ = t·e₁∧η + (1−t)·ω` on G(k,n)≥0 and the fiber polytopes over each factor.

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exterior::{IndexSet, MultiVector};
use crate::linalg::{self, Row};
use crate::plucker;
use crate::polytope::HPolytope;
use crate::rational::{self, Rational};

/// A point of G(k,n)≥0: a normalized, nonnegative, decomposable k-vector.
#[derive(Clone, Debug, PartialEq)]
pub struct ChamberPoint {
    rho: MultiVector,
}

impl ChamberPoint {
    pub fn new(rho: MultiVector) -> Result<Self> {
        validate_factor(&rho, "rho")?;
        Ok(ChamberPoint { rho })
    }

    pub fn rho(&self) -> &MultiVector {
        &self.rho
    }

    pub fn into_inner(self) -> MultiVector {
        self.rho
    }

    pub fn k(&self) -> usize {
        self.rho.grade()
    }

    pub fn n(&self) -> usize {
        self.rho.n()
    }
}

impl Serialize for ChamberPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rho.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ChamberPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        ChamberPoint::new(MultiVector::deserialize(d)?).map_err(D::Error::custom)
    }
}

fn validate_factor(w: &MultiVector, name: &str) -> Result<()> {
    if !w.is_normalized() {
        return Err(Error::Validation(format!("{name} is not normalized")));
    }
    if !w.classify_sign().is_nonnegative() {
        return Err(Error::Validation(format!("{name} has a negative coefficient")));
    }
    if !plucker::is_decomposable(w)? {
        return Err(Error::Validation(format!("{name} is not decomposable")));
    }
    Ok(())
}

/// Chamber coordinates. `eta` (grade k−1) is absent iff `t = 0`, `omega` (grade k) iff `t = 1`;
/// both live in ℝⁿ on the indices 2..n.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitTriple {
    #[serde(serialize_with = "ser_rational", deserialize_with = "de_rational")]
    pub t: Rational,
    pub eta: Option<MultiVector>,
    pub omega: Option<MultiVector>,
}

fn ser_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational::format(r))
}

fn de_rational<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
    rational::parse(&String::deserialize(d)?).map_err(D::Error::custom)
}

impl SplitTriple {
    pub fn validate(&self) -> Result<()> {
        let t = &self.t;
        if t.is_negative() || *t > Rational::one() {
            return Err(Error::Validation(format!("t = {t} is outside [0,1]")));
        }
        match (&self.eta, t.is_zero()) {
            (None, false) => return Err(Error::Validation("eta is required when t > 0".into())),
            (Some(_), true) => return Err(Error::Validation("eta must be absent when t = 0".into())),
            _ => {}
        }
        match (&self.omega, t.is_one()) {
            (None, false) => return Err(Error::Validation("omega is required when t < 1".into())),
            (Some(_), true) => return Err(Error::Validation("omega must be absent when t = 1".into())),
            _ => {}
        }
        for (w, name) in [(&self.eta, "eta"), (&self.omega, "omega")] {
            if let Some(w) = w {
                if !w.avoids_first() {
                    return Err(Error::Validation(format!("{name} involves e1")));
                }
                validate_factor(w, name)?;
            }
        }
        if let (Some(eta), Some(omega)) = (&self.eta, &self.omega) {
            if eta.n() != omega.n() {
                return Err(Error::AmbientMismatch(eta.n(), omega.n()));
            }
            if eta.grade() + 1 != omega.grade() {
                return Err(Error::GradeMismatch { expected: omega.grade() - 1, found: eta.grade() });
            }
            if !plucker::contains(eta, omega)? {
                return Err(Error::Containment("eta is not contained in omega".into()));
            }
        }
        Ok(())
    }
}

/// Chamber coordinates of `p`. Exact.
pub fn split(p: &ChamberPoint) -> Result<SplitTriple> {
    let rho = p.rho();
    let n = rho.n();
    let (with_first, without_first) = rho.split_on(1);
    if with_first.is_zero() {
        return Ok(SplitTriple { t: Rational::zero(), eta: None, omega: Some(rho.clone()) });
    }
    // ρ = e₁∧η₀ + ω₂ with η₀ = ι_{e₁}ρ
    let e1 = MultiVector::vector(&linalg::unit(n, 0));
    let eta0 = with_first.contract(&e1)?;
    let t = eta0.coefficient_sum();
    let eta = Some(eta0.scaled(&t.recip()));
    let omega = if t.is_one() {
        None
    } else {
        Some(without_first.scaled(&(Rational::one() - &t).recip()))
    };
    Ok(SplitTriple { t, eta, omega })
}

/// `t·e₁∧η + (1−t)·ω`. Exact inverse of [`split`].
pub fn assemble(s: &SplitTriple) -> Result<ChamberPoint> {
    s.validate()?;
    let n = s.eta.as_ref().or(s.omega.as_ref()).map(MultiVector::n).expect("validated");
    let k = s.omega.as_ref().map_or_else(|| s.eta.as_ref().expect("validated").grade() + 1, MultiVector::grade);
    let mut rho = MultiVector::zero(n, k);
    if let Some(eta) = &s.eta {
        let e1 = MultiVector::vector(&linalg::unit(n, 0));
        rho = rho.try_add(&e1.wedge(eta)?.scaled(&s.t))?;
    }
    if let Some(omega) = &s.omega {
        rho = rho.try_add(&omega.scaled(&(Rational::one() - &s.t)))?;
    }
    ChamberPoint::new(rho).map_err(|e| match e {
        Error::Validation(msg) => Error::Validation(format!("assembled point is invalid: {msg}")),
        other => other,
    })
}

/// A fiber polytope given by a linear family `x(c) = Σ cᵢ·genᵢ` of k-vectors, cut out by
/// `x(c)_A ≥ 0` for every index set and `Σ_A x(c)_A = 1`.
///
/// Coordinates `u` are all `cᵢ` except the pivot `c_{i*}`, which is solved from the normalization.
#[derive(Clone, Debug)]
pub struct LinearFiber {
    gens: Vec<MultiVector>,
    sums: Vec<Rational>,
    pivot: usize,
    /// `(a, b)` meaning `a·u ≤ b`.
    constraints: Vec<(Row, Rational)>,
    vertices: Vec<Row>,
    frame: Frame,
}

/// Orthonormal frame of the fiber's affine span inside the dense coefficient space, with origin at
/// the exact vertex mean. Lengths in this frame are the coefficient-space lengths, so fibers stay
/// bounded even where the generators degenerate.
#[derive(Clone, Debug)]
struct Frame {
    /// Dense directions `genⱼ − (Sⱼ/S_{i*})·gen_{i*}`, one per coordinate `u_j`.
    dirs: Vec<Row>,
    origin: Row,
    axes: Vec<Vec<f64>>,
    /// Index-set positions where every direction vanishes.
    fixed: Vec<bool>,
}

impl Frame {
    fn new(gens: &[MultiVector], sums: &[Rational], pivot: usize, mean: &[Rational]) -> Self {
        let dense: Vec<Row> = gens.iter().map(MultiVector::to_dense).collect();
        let dirs: Vec<Row> = (0..gens.len())
            .filter(|&j| j != pivot)
            .map(|j| {
                let r = &sums[j] / &sums[pivot];
                dense[j].iter().zip(&dense[pivot]).map(|(a, b)| a - &r * b).collect()
            })
            .collect();
        let base: Row = dense[pivot].iter().map(|x| x / &sums[pivot]).collect();
        let origin: Row = (0..base.len())
            .map(|i| dirs.iter().zip(mean).fold(base[i].clone(), |acc, (d, u)| acc + &d[i] * u))
            .collect();
        let fixed = (0..base.len()).map(|i| dirs.iter().all(|d| d[i].is_zero())).collect();
        let (rows, pivots) = linalg::rref(&dirs);
        let axes = orthonormalize(rows.iter().take(pivots.len()).map(|r| r.iter().map(rational::to_f64).collect()));
        Frame { dirs, origin, axes, fixed }
    }
}

/// Modified Gram–Schmidt with one reorthogonalization pass.
fn orthonormalize(vectors: impl Iterator<Item = Vec<f64>>) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for mut v in vectors {
        for _ in 0..2 {
            for q in &out {
                let c: f64 = q.iter().zip(&v).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(q).for_each(|(x, qi)| *x -= c * qi);
            }
        }
        let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        out.push(v.into_iter().map(|x| x / len).collect());
    }
    out
}

impl LinearFiber {
    fn from_generators(gens: Vec<MultiVector>) -> Result<Self> {
        let (n, k) = (gens[0].n(), gens[0].grade());
        let sums: Vec<Rational> = gens.iter().map(MultiVector::coefficient_sum).collect();
        let pivot = (0..sums.len())
            .max_by(|&i, &j| sums[i].abs().cmp(&sums[j].abs()).then(j.cmp(&i)))
            .expect("at least one generator");
        if sums[pivot].is_zero() {
            return Err(Error::Empty);
        }
        let d = gens.len() - 1;
        let mut constraints = Vec::new();
        for a in IndexSet::all(n, k) {
            let col: Vec<Rational> = gens.iter().map(|g| g.coeff(&a)).collect();
            // x_A = col·c, c_{i*} = (1 − Σ_{j≠i*} S_j u_j)/S_{i*}
            let base = &col[pivot] / &sums[pivot];
            let row: Row = (0..gens.len())
                .filter(|&j| j != pivot)
                .map(|j| &col[j] - &base * &sums[j])
                .collect();
            debug_assert_eq!(row.len(), d);
            if row.iter().all(Zero::is_zero) {
                if base.is_negative() {
                    return Err(Error::Empty);
                }
                continue;
            }
            // x_A ≥ 0  ⇔  −row·u ≤ base
            constraints.push((row.iter().map(|x| -x).collect(), base));
        }
        let vertices = exact_vertices(d, &constraints)?;
        let mean = vertex_mean(d, &vertices);
        let frame = Frame::new(&gens, &sums, pivot, &mean);
        Ok(LinearFiber { gens, sums, pivot, constraints, vertices, frame })
    }

    /// Contained (k−1)-planes of a decomposable ω, parametrized by `v ↦ ι_v ω` for `v` in the
    /// plane of ω (coordinates in its RREF basis).
    pub fn over_omega(omega: &MultiVector) -> Result<Self> {
        validate_factor(omega, "omega")?;
        if omega.grade() == 0 {
            return Err(Error::Validation("a 0-plane contains no smaller plane".into()));
        }
        let basis = plucker::spanning_vectors(omega)?;
        let gens = basis
            .rows()
            .iter()
            .map(|r| omega.contract(&MultiVector::vector(r)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_generators(gens)
    }

    /// Containing (k+1)-planes of a decomposable η, parametrized by `v ↦ η∧v` for `v` in the span
    /// of the unit vectors at the non-pivot columns of η's RREF basis.
    pub fn over_eta(eta: &MultiVector) -> Result<Self> {
        validate_factor(eta, "eta")?;
        let n = eta.n();
        if eta.grade() >= n {
            return Err(Error::Validation("the whole space is contained in no larger plane".into()));
        }
        let pivots: Vec<usize> = if eta.grade() == 0 {
            Vec::new()
        } else {
            linalg::rref(plucker::spanning_vectors(eta)?.rows()).1
        };
        let gens = (0..n)
            .filter(|j| !pivots.contains(j))
            .map(|j| eta.wedge(&MultiVector::vector(&linalg::unit(n, j))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_generators(gens)
    }

    /// Dimension of the coordinate space (number of generators minus one).
    pub fn dim(&self) -> usize {
        self.gens.len() - 1
    }

    pub fn generators(&self) -> &[MultiVector] {
        &self.gens
    }

    pub fn constraints(&self) -> &[(Row, Rational)] {
        &self.constraints
    }

    /// Exact vertices in `u` coordinates.
    pub fn vertices(&self) -> &[Row] {
        &self.vertices
    }

    /// Exact vertex mean; lies in the relative interior.
    pub fn vertex_mean(&self) -> Row {
        vertex_mean(self.dim(), &self.vertices)
    }

    /// The fiber in an orthonormal frame of its span in coefficient space, centered at the
    /// vertex mean.
    pub fn ortho_polytope(&self) -> Result<HPolytope> {
        let f = &self.frame;
        let rows: Vec<(Vec<f64>, f64)> = (0..f.origin.len())
            .filter(|&i| !f.fixed[i])
            .map(|i| (f.axes.iter().map(|a| -a[i]).collect::<Vec<f64>>(), rational::to_f64(&f.origin[i])))
            .collect();
        // a row with a negligible normal is a constant constraint already met at the origin;
        // keeping it would only inflate the polytope's tolerance scale
        let top = rows.iter().map(|(a, _)| crate::polytope::norm(a)).fold(0.0f64, f64::max);
        let cons = rows.into_iter().filter(|(a, _)| crate::polytope::norm(a) > 1e-12 * top).collect();
        HPolytope::new(self.dim(), cons)
    }

    /// Orthonormal-frame coordinates of a point of the fiber's span.
    pub fn ortho_coords(&self, x: &MultiVector) -> Vec<f64> {
        let diff: Vec<f64> =
            x.to_dense().iter().zip(&self.frame.origin).map(|(a, b)| rational::to_f64(&(a - b))).collect();
        self.frame.axes.iter().map(|a| a.iter().zip(&diff).map(|(p, q)| p * q).sum()).collect()
    }

    /// The exact fiber point nearest to the orthonormal-frame point `w`, brought into the polytope.
    /// Coefficients that come out below `snap` are made exactly zero when the face allows it.
    pub fn from_ortho(&self, w: &[f64], snap: f64) -> Result<MultiVector> {
        if w.len() != self.dim() {
            return Err(Error::Validation(format!("expected {} fiber coordinates, got {}", self.dim(), w.len())));
        }
        let f = &self.frame;
        let target = (0..f.origin.len())
            .map(|i| rational::from_f64(f.axes.iter().zip(w).map(|(a, x)| a[i] * x).sum()))
            .collect::<Result<Row>>()?;
        // least squares in the direction coordinates
        let gram: Vec<Row> = f.dirs.iter().map(|a| f.dirs.iter().map(|b| linalg::dot(a, b)).collect()).collect();
        let rhs: Row = f.dirs.iter().map(|a| linalg::dot(a, &target)).collect();
        let delta = linalg::solve_columns(&gram, &rhs).expect("fiber directions are independent");
        let u: Row = self.vertex_mean().iter().zip(&delta).map(|(a, b)| a + b).collect();
        let u = self.snap(&u, &rational::from_f64(snap)?);
        self.point(&self.clamp(&u))
    }

    /// Moves `u` orthogonally onto the face where every coefficient below `tol` vanishes.
    /// Leaves `u` alone if those coefficients cannot vanish together.
    pub fn snap(&self, u: &[Rational], tol: &Rational) -> Row {
        // the slack of each constraint is exactly the corresponding coefficient
        let active: Vec<&(Row, Rational)> =
            self.constraints.iter().filter(|(a, b)| &(b - linalg::dot(a, u)) < tol).collect();
        if active.is_empty() {
            return u.to_vec();
        }
        let gram: Vec<Row> = active.iter().map(|(a, _)| active.iter().map(|(c, _)| linalg::dot(a, c)).collect()).collect();
        let rhs: Row = active.iter().map(|(a, b)| b - linalg::dot(a, u)).collect();
        let Some(lambda) = linalg::solve_columns(&gram, &rhs) else { return u.to_vec() };
        (0..u.len())
            .map(|i| active.iter().zip(&lambda).fold(u[i].clone(), |acc, ((a, _), l)| acc + &a[i] * l))
            .collect()
    }

    /// The fiber in the coordinates `u`.
    pub fn polytope(&self) -> Result<HPolytope> {
        let cons = self
            .constraints
            .iter()
            .map(|(a, b)| (a.iter().map(rational::to_f64).collect(), rational::to_f64(b)))
            .collect();
        HPolytope::new(self.dim(), cons)
    }

    pub fn contains(&self, u: &[Rational]) -> bool {
        self.constraints.iter().all(|(a, b)| linalg::dot(a, u) <= *b)
    }

    /// The normalized k-vector at `u`.
    pub fn point(&self, u: &[Rational]) -> Result<MultiVector> {
        if u.len() != self.dim() {
            return Err(Error::Validation(format!("expected {} fiber coordinates, got {}", self.dim(), u.len())));
        }
        let mut c = Vec::with_capacity(self.gens.len());
        let mut rest = Rational::one();
        let mut it = u.iter();
        for j in 0..self.gens.len() {
            if j == self.pivot {
                c.push(Rational::zero());
            } else {
                let x = it.next().expect("length checked").clone();
                rest -= &self.sums[j] * &x;
                c.push(x);
            }
        }
        c[self.pivot] = rest / &self.sums[self.pivot];
        let (n, k) = (self.gens[0].n(), self.gens[0].grade());
        c.iter().zip(&self.gens).try_fold(MultiVector::zero(n, k), |acc, (ci, g)| acc.try_add(&g.scaled(ci)))
    }

    /// Fiber coordinates of `x`, which must lie in the span of the generators.
    pub fn coords(&self, x: &MultiVector) -> Result<Row> {
        let cols: Vec<Row> = self.gens.iter().map(MultiVector::to_dense).collect();
        let c = linalg::solve_columns(&cols, &x.to_dense())
            .ok_or_else(|| Error::Containment("point is not in the span of the fiber".into()))?;
        Ok(c.into_iter().enumerate().filter(|&(j, _)| j != self.pivot).map(|(_, v)| v).collect())
    }

    /// Brings approximate coordinates exactly into the polytope: projects onto its affine hull
    /// along the hull's own directions, then shrinks toward the vertex mean until feasible.
    pub fn clamp(&self, u: &[Rational]) -> Row {
        let center = self.vertex_mean();
        let dirs = self.hull_directions(&center);
        let delta: Row = u.iter().zip(&center).map(|(a, b)| a - b).collect();
        // least-squares coefficients of delta in the hull directions
        let projected = if dirs.is_empty() {
            vec![Rational::zero(); u.len()]
        } else {
            let gram: Vec<Row> = dirs.iter().map(|a| dirs.iter().map(|b| linalg::dot(a, b)).collect()).collect();
            let rhs: Row = dirs.iter().map(|a| linalg::dot(a, &delta)).collect();
            let coef = linalg::solve_columns(&gram, &rhs).expect("hull directions are independent");
            (0..u.len())
                .map(|i| dirs.iter().zip(&coef).fold(Rational::zero(), |acc, (d, c)| acc + &d[i] * c))
                .collect()
        };
        let mut lambda = Rational::one();
        for (a, b) in &self.constraints {
            let slack = b - linalg::dot(a, &center);
            let step = linalg::dot(a, &projected);
            if step.is_positive() && step * &lambda > slack {
                lambda = &slack / linalg::dot(a, &projected);
            }
        }
        center.iter().zip(&projected).map(|(c, p)| c + p * &lambda).collect()
    }

    /// Basis of the linear space parallel to the affine hull of the vertices.
    fn hull_directions(&self, center: &[Rational]) -> Vec<Row> {
        let diffs: Vec<Row> =
            self.vertices.iter().map(|v| v.iter().zip(center).map(|(a, b)| a - b).collect()).collect();
        let (rows, pivots) = linalg::rref(&diffs);
        rows.into_iter().take(pivots.len()).collect()
    }
}

fn vertex_mean(d: usize, vertices: &[Row]) -> Row {
    let m = Rational::from_integer(vertices.len().into());
    (0..d).map(|i| vertices.iter().fold(Rational::zero(), |acc, v| acc + &v[i]) / &m).collect()
}

/// Vertices of `{u : a·u ≤ b}` by exact enumeration of `d`-subsets of constraints.
fn exact_vertices(d: usize, constraints: &[(Row, Rational)]) -> Result<Vec<Row>> {
    if d == 0 {
        return Ok(vec![Vec::new()]);
    }
    let mut out: Vec<Row> = Vec::new();
    for combo in (0..constraints.len()).combinations(d) {
        let rows: Vec<Row> = combo.iter().map(|&i| constraints[i].0.clone()).collect();
        if linalg::rank(&rows) < d {
            continue;
        }
        let cols: Vec<Row> = (0..d).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect();
        let rhs: Row = combo.iter().map(|&i| constraints[i].1.clone()).collect();
        let Some(u) = linalg::solve_columns(&cols, &rhs) else { continue };
        if constraints.iter().all(|(a, b)| linalg::dot(a, &u) <= *b) && !out.contains(&u) {
            out.push(u);
        }
    }
    if out.is_empty() {
        return Err(Error::Empty);
    }
    Ok(out)
}

fn require_avoids_first(w: &MultiVector, name: &str) -> Result<MultiVector> {
    if !w.avoids_first() {
        return Err(Error::Validation(format!("{name} must live on the indices 2..n")));
    }
    w.drop_first()
}

/// Fiber over η (grade k−1 on 2..n) of the `t ≥ 1/2` part: the ω ⊃ η, as a polytope of
/// dimension n−k−1 in the orthonormal frame of [`LinearFiber::ortho_polytope`].
pub fn f_fiber_polytope(eta: &MultiVector) -> Result<HPolytope> {
    LinearFiber::over_eta(&require_avoids_first(eta, "eta")?)?.ortho_polytope()
}

/// Fiber over ω (grade k on 2..n) of the `t ≤ 1/2` part: the η ⊂ ω, as a polytope of dimension
/// k−1 in the orthonormal frame of [`LinearFiber::ortho_polytope`].
pub fn e_fiber_polytope(omega: &MultiVector) -> Result<HPolytope> {
    LinearFiber::over_omega(&require_avoids_first(omega, "omega")?)?.ortho_polytope()
}

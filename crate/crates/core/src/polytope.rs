//! Bounded convex polytopes in low dimension.
//!
//! Everything here is floating point with tolerances relative to the polytope's scale. Vertex
//! enumeration intersects every `m`-subset of constraints; hull facets of a point set are found
//! by testing every affinely independent `m`-subset of points. Both are exhaustive and only meant
//! for `m ≤ 8` and a few dozen constraints.

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative tolerance for incidence and feasibility tests.
pub const REL_TOL: f64 = 1e-9;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

/// `{y : normals[i] · y ≤ offsets[i]}`, stored with unit normals.
#[derive(Clone, Debug, PartialEq)]
pub struct HPolytope {
    dim: usize,
    normals: Vec<Vec<f64>>,
    offsets: Vec<f64>,
}

impl HPolytope {
    pub fn new(dim: usize, constraints: Vec<(Vec<f64>, f64)>) -> Result<Self> {
        let mut normals = Vec::with_capacity(constraints.len());
        let mut offsets = Vec::with_capacity(constraints.len());
        for (a, b) in constraints {
            if a.len() != dim {
                return Err(Error::Validation(format!("normal of length {} in dimension {dim}", a.len())));
            }
            let len = norm(&a);
            if len.is_nan() || len <= 0.0 || !b.is_finite() {
                return Err(Error::Validation("constraint normals must be nonzero and finite".into()));
            }
            normals.push(scale(&a, 1.0 / len));
            offsets.push(b / len);
        }
        Ok(HPolytope { dim, normals, offsets })
    }

    /// Axis-aligned box `lo ≤ y ≤ hi`.
    pub fn cuboid(lo: &[f64], hi: &[f64]) -> Self {
        let dim = lo.len();
        let mut cons = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            let mut e = vec![0.0; dim];
            e[i] = 1.0;
            cons.push((e.clone(), hi[i]));
            cons.push((scale(&e, -1.0), -lo[i]));
        }
        HPolytope::new(dim, cons).expect("box constraints are valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constraints(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.normals.iter().map(Vec::as_slice).zip(self.offsets.iter().copied())
    }

    pub fn normals(&self) -> &[Vec<f64>] {
        &self.normals
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    /// Magnitude used to scale tolerances.
    pub fn scale(&self) -> f64 {
        self.offsets.iter().fold(0.0f64, |m, b| m.max(b.abs()))
    }

    fn tol(&self) -> f64 {
        REL_TOL * self.scale().max(1e-12)
    }

    pub fn contains(&self, y: &[f64], tol: f64) -> bool {
        self.constraints().all(|(a, b)| dot(a, y) <= b + tol)
    }

    /// Largest violation `max_i (a_i·y − b_i)`; nonpositive inside.
    pub fn violation(&self, y: &[f64]) -> f64 {
        self.constraints().map(|(a, b)| dot(a, y) - b).fold(f64::NEG_INFINITY, f64::max)
    }

    /// `P + shift`.
    pub fn translated(&self, shift: &[f64]) -> Self {
        HPolytope {
            dim: self.dim,
            normals: self.normals.clone(),
            offsets: self.constraints().map(|(a, b)| b + dot(a, shift)).collect(),
        }
    }

    /// `c · P` about the origin; `c = 0` collapses to the origin.
    pub fn scaled(&self, c: f64) -> Self {
        HPolytope { dim: self.dim, normals: self.normals.clone(), offsets: self.offsets.iter().map(|b| b * c).collect() }
    }

    /// Bounded iff the normals positively span the space.
    pub fn is_bounded(&self) -> bool {
        if self.dim == 0 {
            return true;
        }
        if affine_dim(&self.normals, 1e-9) < self.dim {
            return false;
        }
        hull_facets(&self.normals, 1e-9).iter().all(|(_, b)| *b > 1e-9)
    }

    /// Exact-up-to-tolerance vertex set, duplicates removed.
    pub fn vertices(&self) -> Result<Vec<Vec<f64>>> {
        let m = self.dim;
        if m == 0 {
            return Ok(vec![Vec::new()]);
        }
        if !self.is_bounded() {
            return Err(Error::Unbounded);
        }
        let tol = self.tol();
        let mut out: Vec<Vec<f64>> = Vec::new();
        for combo in (0..self.normals.len()).combinations(m) {
            let a = DMatrix::from_fn(m, m, |i, j| self.normals[combo[i]][j]);
            let b = DVector::from_fn(m, |i, _| self.offsets[combo[i]]);
            let Some(x) = a.lu().solve(&b) else { continue };
            let x: Vec<f64> = x.iter().copied().collect();
            if x.iter().any(|v| !v.is_finite()) {
                continue;
            }
            // reject near-singular systems whose solution does not actually satisfy them
            if combo.iter().any(|&i| (dot(&self.normals[i], &x) - self.offsets[i]).abs() > tol) {
                continue;
            }
            if self.violation(&x) > tol {
                continue;
            }
            if !out.iter().any(|v| norm(&sub(v, &x)) <= 10.0 * tol) {
                out.push(x);
            }
        }
        if out.is_empty() {
            return Err(Error::Empty);
        }
        Ok(out)
    }

    /// Volume-weighted centroid.
    pub fn barycenter(&self) -> Result<Vec<f64>> {
        let verts = self.vertices()?;
        if self.dim == 0 {
            return Ok(Vec::new());
        }
        let tol = self.tol();
        if affine_dim(&verts, tol) < self.dim {
            return Err(Error::Degenerate);
        }
        Ok(volume_centroid(&verts, tol).1)
    }

    /// Barycenter when full-dimensional, otherwise the mean of the vertices.
    pub fn center(&self) -> Result<Vec<f64>> {
        match self.barycenter() {
            Err(Error::Degenerate) => {
                let verts = self.vertices()?;
                let mut c = vec![0.0; self.dim];
                for v in &verts {
                    c = add(&c, v);
                }
                Ok(scale(&c, 1.0 / verts.len() as f64))
            }
            other => other,
        }
    }

    pub fn volume(&self) -> Result<f64> {
        let verts = self.vertices()?;
        let tol = self.tol();
        if affine_dim(&verts, tol) < self.dim {
            return Ok(0.0);
        }
        Ok(volume_centroid(&verts, tol).0)
    }

    /// Distance from `p` to the nearest facet hyperplane; positive iff `p` is interior.
    pub fn inradius_at(&self, p: &[f64]) -> f64 {
        -self.violation(p)
    }

    /// `sup{λ ≥ 0 : λu ∈ P}` for a polytope containing the origin.
    pub fn radial(&self, u: &[f64]) -> f64 {
        radial_of(self.constraints(), u)
    }
}

/// Radial function of `{a·y ≤ b}` from the origin along `u`.
pub fn radial_of<'a>(constraints: impl Iterator<Item = (&'a [f64], f64)>, u: &[f64]) -> f64 {
    let mut best = f64::INFINITY;
    for (a, b) in constraints {
        let au = dot(a, u);
        if au > 1e-15 {
            best = best.min(b.max(0.0) / au);
        }
    }
    best
}

/// Support function `max_{v ∈ points} a·v`.
pub fn support(points: &[Vec<f64>], a: &[f64]) -> f64 {
    points.iter().map(|v| dot(a, v)).fold(f64::NEG_INFINITY, f64::max)
}

/// Dimension of the affine hull.
pub fn affine_dim(points: &[Vec<f64>], tol: f64) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let d = points[0].len();
    let rows = points.len() - 1;
    let m = DMatrix::from_fn(rows.max(d), d, |i, j| if i < rows { points[i + 1][j] - points[0][j] } else { 0.0 });
    let sv = m.singular_values();
    let top = sv.iter().copied().fold(0.0f64, f64::max);
    sv.iter().filter(|&&s| s > tol.max(top * 1e-12)).count()
}

/// Unit vector orthogonal to the `d−1` given vectors in ℝ^d, if they are independent.
fn normal_to(diffs: &[Vec<f64>], d: usize, tol: f64) -> Option<Vec<f64>> {
    if d == 1 {
        return Some(vec![1.0]);
    }
    let m = DMatrix::from_fn(d, d, |i, j| if i < diffs.len() { diffs[i][j] } else { 0.0 });
    let svd = m.svd(false, true);
    let v_t = svd.v_t?;
    let sv = &svd.singular_values;
    let (imin, _) = sv.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1))?;
    // the remaining d−1 singular values must be clearly nonzero
    let scale = sv.iter().copied().fold(0.0f64, f64::max);
    if sv.iter().enumerate().any(|(i, &s)| i != imin && s <= tol.max(scale * 1e-10)) {
        return None;
    }
    Some(v_t.row(imin).iter().copied().collect())
}

/// Facets `(unit normal, offset)` of the convex hull of a full-dimensional point set.
pub fn hull_facets(points: &[Vec<f64>], tol: f64) -> Vec<(Vec<f64>, f64)> {
    let Some(d) = points.first().map(Vec::len) else { return Vec::new() };
    let mut pts: Vec<&Vec<f64>> = Vec::new();
    for p in points {
        if !pts.iter().any(|q| norm(&sub(p, q)) <= tol) {
            pts.push(p);
        }
    }
    let mut facets: Vec<(Vec<f64>, f64)> = Vec::new();
    for combo in (0..pts.len()).combinations(d) {
        let base = pts[combo[0]];
        let diffs: Vec<Vec<f64>> = combo[1..].iter().map(|&i| sub(pts[i], base)).collect();
        let Some(a) = normal_to(&diffs, d, tol) else { continue };
        let b = dot(&a, base);
        let (mut above, mut below) = (false, false);
        for p in &pts {
            let s = dot(&a, p) - b;
            above |= s > tol;
            below |= s < -tol;
        }
        let facet = match (above, below) {
            (false, _) => (a, b),
            (true, false) => (scale(&a, -1.0), -b),
            (true, true) => continue,
        };
        if !facets.iter().any(|(n, o)| norm(&sub(n, &facet.0)) <= 1e-7 && (o - facet.1).abs() <= tol.max(1e-12)) {
            facets.push(facet);
        }
    }
    facets
}

/// Orthonormal basis of the hyperplane orthogonal to the unit vector `a`.
fn complement_basis(a: &[f64]) -> Vec<Vec<f64>> {
    let d = a.len();
    let mut basis: Vec<Vec<f64>> = vec![a.to_vec()];
    for i in 0..d {
        let mut e = vec![0.0; d];
        e[i] = 1.0;
        for b in &basis {
            e = sub(&e, &scale(b, dot(&e, b)));
        }
        let len = norm(&e);
        if len > 1e-6 {
            basis.push(scale(&e, 1.0 / len));
        }
        if basis.len() == d {
            break;
        }
    }
    basis.remove(0);
    basis
}

/// Volume and centroid of the hull of a full-dimensional point set, by coning every facet
/// from the first point and recursing into the facets.
pub fn volume_centroid(points: &[Vec<f64>], tol: f64) -> (f64, Vec<f64>) {
    let d = points[0].len();
    if d == 1 {
        let lo = points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
        let hi = points.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
        return (hi - lo, vec![0.5 * (lo + hi)]);
    }
    let apex = &points[0];
    let mut total = 0.0;
    let mut moment = vec![0.0; d];
    for (a, b) in hull_facets(points, tol) {
        let h = b - dot(&a, apex);
        if h <= tol {
            continue;
        }
        let on: Vec<&Vec<f64>> = points.iter().filter(|p| (dot(&a, p) - b).abs() <= tol).collect();
        let basis = complement_basis(&a);
        let origin = on[0];
        let local: Vec<Vec<f64>> = on.iter().map(|p| basis.iter().map(|e| dot(e, &sub(p, origin))).collect()).collect();
        let (vol_f, c_local) = volume_centroid(&local, tol);
        let mut c_f = origin.clone();
        for (e, c) in basis.iter().zip(&c_local) {
            c_f = add(&c_f, &scale(e, *c));
        }
        let vol = h * vol_f / d as f64;
        let centroid = scale(&add(apex, &scale(&c_f, d as f64)), 1.0 / (d as f64 + 1.0));
        total += vol;
        moment = add(&moment, &scale(&centroid, vol));
    }
    (total, scale(&moment, 1.0 / total))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        norm(&sub(a, b)) <= tol
    }

    #[test]
    fn square_vertices() {
        let sq = HPolytope::cuboid(&[-1.0, -1.0], &[1.0, 1.0]);
        let v = sorted(sq.vertices().unwrap());
        assert_eq!(v, vec![vec![-1.0, -1.0], vec![-1.0, 1.0], vec![1.0, -1.0], vec![1.0, 1.0]]);
        assert!(close(&sq.barycenter().unwrap(), &[0.0, 0.0], 1e-12));
    }

    #[test]
    fn triangle_vertices_and_centroid() {
        let t = HPolytope::new(
            2,
            vec![(vec![-1.0, 0.0], 0.0), (vec![0.0, -1.0], 0.0), (vec![1.0, 1.0], 1.0)],
        )
        .unwrap();
        let v = sorted(t.vertices().unwrap());
        assert!(close(&v[0], &[0.0, 0.0], 1e-12) && close(&v[1], &[0.0, 1.0], 1e-12) && close(&v[2], &[1.0, 0.0], 1e-12));
        assert!(close(&t.barycenter().unwrap(), &[1.0 / 3.0, 1.0 / 3.0], 1e-12));
        assert!((t.volume().unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn unbounded_rejected() {
        let half = HPolytope::new(2, vec![(vec![1.0, 0.0], 1.0), (vec![0.0, 1.0], 1.0)]).unwrap();
        assert_eq!(half.vertices(), Err(Error::Unbounded));
        assert!(HPolytope::new(1, vec![(vec![0.0], 1.0)]).is_err());
    }

    #[test]
    fn cube_volume_and_centroid() {
        let c = HPolytope::cuboid(&[0.0, 0.0, 0.0], &[1.0, 2.0, 3.0]);
        assert_eq!(c.vertices().unwrap().len(), 8);
        assert!((c.volume().unwrap() - 6.0).abs() < 1e-9);
        assert!(close(&c.barycenter().unwrap(), &[0.5, 1.0, 1.5], 1e-9));
    }

    #[test]
    fn degenerate_polytopes() {
        // a segment in the plane
        let seg = HPolytope::new(
            2,
            vec![(vec![0.0, 1.0], 0.0), (vec![0.0, -1.0], 0.0), (vec![1.0, 0.0], 1.0), (vec![-1.0, 0.0], 1.0)],
        )
        .unwrap();
        assert_eq!(seg.barycenter(), Err(Error::Degenerate));
        assert!(close(&seg.center().unwrap(), &[0.0, 0.0], 1e-12));
        let pt = HPolytope::cuboid(&[-1.0, -1.0], &[1.0, 1.0]).scaled(0.0);
        assert_eq!(pt.vertices().unwrap(), vec![vec![0.0, 0.0]]);
    }

    #[test]
    fn radial_function_of_square() {
        let sq = HPolytope::cuboid(&[-1.0, -1.0], &[1.0, 1.0]);
        let u = [1.0 / 2f64.sqrt(), 1.0 / 2f64.sqrt()];
        assert!((sq.radial(&u) - 2f64.sqrt()).abs() < 1e-12);
        assert!((sq.radial(&[1.0, 0.0]) - 1.0).abs() < 1e-12);
    }
}

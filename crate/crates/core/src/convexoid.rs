//! Fibered polytope bodies over a cube and their maps onto half-balls and balls.
//!
//! A convexoid is given by a base cube `Q = [0,1] × [−1,1]^{b−1}` and an oracle assigning to each
//! base point `p` a bounded polytope `E(p)` in a fixed `m`-dimensional fiber space. Fibers must be
//! full-dimensional over the interior of `Q` and over the open bottom face `{0} × (−1,1)^{b−1}`;
//! over the distinguished boundary `dQ` (the rest of `∂Q`) they may degenerate.
//!
//! The map onto the closed half-ball runs in three steps:
//!
//! 1. translate every fiber so its barycenter sits at the origin;
//! 2. rescale each fiber radially onto the join fiber `E′(p) = (1−s)E(0) ⊕ sE(P(p))`, where
//!    `P(p) = p/s` is the radial projection onto `dQ` and `s = ‖p‖_∞`;
//! 3. send the star-convex join body onto the half-ball by `x ↦ x / T(x/‖x‖)`, with `T` the exit
//!    time of the ray from the origin.
//!
//! Two convexoids whose bottoms are identified by a homeomorphism glue to a map onto the ball.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polytope::{self, add, dot, norm, radial_of, scale, sub, HPolytope};

/// Source of fibers over the base cube.
pub trait FiberOracle: Send + Sync {
    fn base_dim(&self) -> usize;
    fn fiber_dim(&self) -> usize;
    fn fiber(&self, p: &[f64]) -> Result<HPolytope>;
}

impl<T: FiberOracle + ?Sized> FiberOracle for Box<T> {
    fn base_dim(&self) -> usize {
        (**self).base_dim()
    }
    fn fiber_dim(&self) -> usize {
        (**self).fiber_dim()
    }
    fn fiber(&self, p: &[f64]) -> Result<HPolytope> {
        (**self).fiber(p)
    }
}

/// The same polytope over every base point.
#[derive(Clone, Debug)]
pub struct ConstantFiber {
    pub base_dim: usize,
    pub fiber: HPolytope,
}

impl FiberOracle for ConstantFiber {
    fn base_dim(&self) -> usize {
        self.base_dim
    }
    fn fiber_dim(&self) -> usize {
        self.fiber.dim()
    }
    fn fiber(&self, _p: &[f64]) -> Result<HPolytope> {
        Ok(self.fiber.clone())
    }
}

/// Fibers with fixed normals whose offsets are tabulated on a regular grid over `Q` and
/// interpolated multilinearly. Axis 0 spans `[0,1]`, the others `[−1,1]`; `offsets` is indexed
/// row-major with axis 0 slowest.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridFiber {
    pub base_dim: usize,
    pub fiber_dim: usize,
    pub normals: Vec<Vec<f64>>,
    pub nodes: Vec<usize>,
    pub offsets: Vec<Vec<f64>>,
}

impl GridFiber {
    pub fn validate(&self) -> Result<()> {
        if self.base_dim == 0 {
            return Err(Error::Validation("base dimension must be at least 1".into()));
        }
        if self.nodes.len() != self.base_dim || self.nodes.iter().any(|&c| c < 2) {
            return Err(Error::Validation("need at least two grid nodes along every base axis".into()));
        }
        let count: usize = self.nodes.iter().product();
        if self.offsets.len() != count {
            return Err(Error::Validation(format!("expected {count} offset rows, got {}", self.offsets.len())));
        }
        if self.normals.iter().any(|a| a.len() != self.fiber_dim) {
            return Err(Error::Validation("normal length differs from fiber dimension".into()));
        }
        if self.offsets.iter().any(|row| row.len() != self.normals.len()) {
            return Err(Error::Validation("offset row length differs from number of normals".into()));
        }
        Ok(())
    }
}

impl FiberOracle for GridFiber {
    fn base_dim(&self) -> usize {
        self.base_dim
    }
    fn fiber_dim(&self) -> usize {
        self.fiber_dim
    }
    fn fiber(&self, p: &[f64]) -> Result<HPolytope> {
        // cell index and local coordinate along each axis
        let mut cell = Vec::with_capacity(self.base_dim);
        let mut frac = Vec::with_capacity(self.base_dim);
        for (axis, &x) in p.iter().enumerate() {
            let (lo, hi) = if axis == 0 { (0.0, 1.0) } else { (-1.0, 1.0) };
            let steps = (self.nodes[axis] - 1) as f64;
            let g = ((x - lo) / (hi - lo) * steps).clamp(0.0, steps);
            let i = (g.floor() as usize).min(self.nodes[axis] - 2);
            cell.push(i);
            frac.push(g - i as f64);
        }
        let mut offsets = vec![0.0; self.normals.len()];
        for corner in 0..(1usize << self.base_dim) {
            let mut weight = 1.0;
            let mut index = 0;
            for axis in 0..self.base_dim {
                let bit = (corner >> axis) & 1;
                weight *= if bit == 1 { frac[axis] } else { 1.0 - frac[axis] };
                index = index * self.nodes[axis] + cell[axis] + bit;
            }
            if weight != 0.0 {
                for (o, v) in offsets.iter_mut().zip(&self.offsets[index]) {
                    *o += weight * v;
                }
            }
        }
        HPolytope::new(self.fiber_dim, self.normals.iter().cloned().zip(offsets).collect())
    }
}

/// `‖p‖_∞`, the gauge of `Q` seen from the bottom center.
pub fn base_gauge(p: &[f64]) -> f64 {
    p.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Radial projection of `p ∈ Q ∖ {0}` onto `dQ`, with the ratio `s = ‖p‖/‖P(p)‖`.
pub fn radial_project_base(p: &[f64]) -> Result<(Vec<f64>, f64)> {
    let s = base_gauge(p);
    if s == 0.0 {
        return Err(Error::Domain("the base origin has no radial projection".into()));
    }
    if p[0] < -1e-12 || s > 1.0 + 1e-12 {
        return Err(Error::Domain(format!("base point {p:?} is outside the cube")));
    }
    Ok((scale(p, 1.0 / s), s.min(1.0)))
}

/// Tolerances of the half-ball map.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexoidConfig {
    /// Absolute bisection tolerance for exit times.
    pub exit_tol: f64,
    /// Slack in the membership test of the join body.
    pub membership_tol: f64,
    /// Slack when validating that an input lies in `E`.
    pub domain_tol: f64,
    /// Points sampled below the exit time to detect re-entry.
    pub star_samples: usize,
    /// Base points with `1 − ‖p‖_∞` below this count as lying on `dQ`: their fibers may be
    /// degenerate and are not rescaled.
    pub boundary_band: f64,
}

impl Default for ConvexoidConfig {
    fn default() -> Self {
        ConvexoidConfig { exit_tol: 1e-10, membership_tol: 1e-12, domain_tol: 1e-7, star_samples: 8, boundary_band: 1e-9 }
    }
}

/// Exit time of a ray from the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct ExitTime {
    pub direction: Vec<f64>,
    pub t: f64,
}

/// Facet normals of `E(0) ⊕ E(q)` with support values of both summands. For `0 < s < 1` the
/// join fiber is exactly `{y : a·y ≤ (1−s)h₀(a) + s h_q(a)}` over these normals.
#[derive(Clone, Debug)]
pub struct JoinFibers {
    normals: Vec<Vec<f64>>,
    h0: Vec<f64>,
    hq: Vec<f64>,
}

impl JoinFibers {
    fn new(v0: &[Vec<f64>], vq: &[Vec<f64>], m: usize) -> Self {
        if m == 0 {
            return JoinFibers { normals: Vec::new(), h0: Vec::new(), hq: Vec::new() };
        }
        let sums: Vec<Vec<f64>> =
            v0.iter().flat_map(|a| vq.iter().map(move |b| scale(&add(a, b), 0.5))).collect();
        let size = sums.iter().map(|p| norm(p)).fold(0.0f64, f64::max).max(1e-300);
        let normals: Vec<Vec<f64>> =
            polytope::hull_facets(&sums, polytope::REL_TOL * size).into_iter().map(|(a, _)| a).collect();
        let h0 = normals.iter().map(|a| polytope::support(v0, a)).collect();
        let hq = normals.iter().map(|a| polytope::support(vq, a)).collect();
        JoinFibers { normals, h0, hq }
    }

    fn offsets(&self, s: f64) -> Vec<f64> {
        self.h0.iter().zip(&self.hq).map(|(a, b)| (1.0 - s) * a + s * b).collect()
    }

    pub fn at(&self, s: f64) -> Result<HPolytope> {
        let m = self.normals.first().map_or(0, Vec::len);
        HPolytope::new(m, self.normals.iter().cloned().zip(self.offsets(s)).collect())
    }

    fn contains(&self, s: f64, y: &[f64], tol: f64) -> bool {
        self.normals.iter().zip(self.offsets(s)).all(|(a, b)| dot(a, y) <= b + tol)
    }

    fn radial(&self, s: f64, u: &[f64]) -> f64 {
        let offs = self.offsets(s);
        radial_of(self.normals.iter().map(Vec::as_slice).zip(offs), u)
    }
}

/// Wraps an oracle so every fiber is translated to have its barycenter at the origin.
#[derive(Clone, Debug)]
pub struct Centered<O> {
    pub inner: O,
    pub boundary_band: f64,
}

pub fn center_fibers<O: FiberOracle>(oracle: O) -> Centered<O> {
    Centered { inner: oracle, boundary_band: ConvexoidConfig::default().boundary_band }
}

impl<O: FiberOracle> Centered<O> {
    /// The centered fiber and the translation that was removed. Over `dQ` degenerate fibers are
    /// centered at their vertex mean; elsewhere degeneracy is a hypothesis violation.
    pub fn centered(&self, p: &[f64]) -> Result<(HPolytope, Vec<f64>)> {
        let raw = self.inner.fiber(p)?;
        let c = match raw.barycenter() {
            Ok(c) => c,
            Err(Error::Degenerate) if base_gauge(p) >= 1.0 - self.boundary_band => raw.center()?,
            Err(e) => return Err(e),
        };
        Ok((raw.translated(&scale(&c, -1.0)), c))
    }
}

impl<O: FiberOracle> FiberOracle for Centered<O> {
    fn base_dim(&self) -> usize {
        self.inner.base_dim()
    }
    fn fiber_dim(&self) -> usize {
        self.inner.fiber_dim()
    }
    fn fiber(&self, p: &[f64]) -> Result<HPolytope> {
        self.centered(p).map(|(f, _)| f)
    }
}

/// A convexoid together with its map onto the closed half-ball.
pub struct Convexoid<O> {
    oracle: Centered<O>,
    cfg: ConvexoidConfig,
    origin_vertices: Vec<Vec<f64>>,
    origin_facets: JoinFibers,
}

impl<O: FiberOracle> Convexoid<O> {
    pub fn new(oracle: O, cfg: ConvexoidConfig) -> Result<Self> {
        if oracle.base_dim() == 0 {
            return Err(Error::Validation("base dimension must be at least 1".into()));
        }
        let oracle = Centered { inner: oracle, boundary_band: cfg.boundary_band };
        let origin = vec![0.0; oracle.base_dim()];
        let (fiber, _) = oracle.centered(&origin)?;
        let origin_vertices = fiber.vertices()?;
        let origin_facets = JoinFibers::new(&origin_vertices, &origin_vertices, fiber.dim());
        Ok(Convexoid { oracle, cfg, origin_vertices, origin_facets })
    }

    pub fn oracle(&self) -> &O {
        &self.oracle.inner
    }

    pub fn base_dim(&self) -> usize {
        self.oracle.base_dim()
    }

    pub fn fiber_dim(&self) -> usize {
        self.oracle.fiber_dim()
    }

    /// Dimension of the body and of the half-ball it maps onto.
    pub fn dim(&self) -> usize {
        self.base_dim() + self.fiber_dim()
    }

    pub fn config(&self) -> &ConvexoidConfig {
        &self.cfg
    }

    pub fn centered_fiber(&self, p: &[f64]) -> Result<(HPolytope, Vec<f64>)> {
        self.oracle.centered(p)
    }

    fn join_towards(&self, q: &[f64]) -> Result<JoinFibers> {
        let (fq, _) = self.oracle.centered(q)?;
        Ok(JoinFibers::new(&self.origin_vertices, &fq.vertices()?, self.fiber_dim()))
    }

    /// The centered join fiber `E′(p)`.
    pub fn join_fiber(&self, p: &[f64]) -> Result<HPolytope> {
        let s = base_gauge(p);
        if s == 0.0 {
            return self.oracle.centered(p).map(|(f, _)| f);
        }
        let (q, s) = radial_project_base(p)?;
        self.join_towards(&q)?.at(s)
    }

    fn check_in_cube(&self, p: &[f64]) -> Result<()> {
        let tol = self.cfg.domain_tol;
        if p.len() != self.base_dim() || p[0] < -tol || p[0] > 1.0 + tol || p[1..].iter().any(|x| x.abs() > 1.0 + tol) {
            return Err(Error::Domain(format!("base point {p:?} is outside the cube")));
        }
        Ok(())
    }

    /// Ray setup: the join data along the base direction and the rate of `s` in `t`.
    fn ray(&self, v: &[f64]) -> Result<(Option<JoinFibers>, f64)> {
        let b = self.base_dim();
        if v.len() != self.dim() {
            return Err(Error::Validation("direction has the wrong dimension".into()));
        }
        if norm(v) == 0.0 {
            return Err(Error::Validation("zero direction".into()));
        }
        if v[0] < -1e-12 {
            return Err(Error::Domain("direction points below the bottom".into()));
        }
        let vb = &v[..b];
        let rate = base_gauge(vb);
        if rate == 0.0 {
            return Ok((None, 0.0));
        }
        let mut q = scale(vb, 1.0 / rate);
        q[0] = q[0].max(0.0);
        Ok((Some(self.join_towards(&q)?), rate))
    }

    fn member(&self, join: &Option<JoinFibers>, rate: f64, v: &[f64], t: f64) -> bool {
        let b = self.base_dim();
        let s = t * rate;
        if s > 1.0 + 1e-12 {
            return false;
        }
        let y = scale(&v[b..], t);
        let tol = self.cfg.membership_tol;
        match join {
            Some(j) => j.contains(s.min(1.0), &y, tol),
            None => self.origin_facets.contains(0.0, &y, tol),
        }
    }

    /// Whether `t·v` lies in the join body.
    pub fn ray_membership(&self, v: &[f64], t: f64) -> Result<bool> {
        let (join, rate) = self.ray(v)?;
        Ok(self.member(&join, rate, v, t))
    }

    /// `sup{t ≥ 0 : t·v ∈ E′}` by doubling then bisection on the membership test.
    pub fn exit_time(&self, v: &[f64]) -> Result<ExitTime> {
        let dir = scale(v, 1.0 / norm(v));
        let (join, rate) = self.ray(&dir)?;
        self.exit_time_with(&dir, &join, rate)
    }

    fn exit_time_with(&self, dir: &[f64], join: &Option<JoinFibers>, rate: f64) -> Result<ExitTime> {
        let member = |t: f64| self.member(join, rate, dir, t);
        let (mut lo, mut hi);
        if member(1.0) {
            lo = 1.0;
            hi = 2.0;
            let mut guard = 0;
            while member(hi) {
                lo = hi;
                hi *= 2.0;
                guard += 1;
                if guard > 60 {
                    return Err(Error::Unbounded);
                }
            }
        } else {
            hi = 1.0;
            lo = 0.5;
            let mut guard = 0;
            while !member(lo) {
                hi = lo;
                lo *= 0.5;
                guard += 1;
                if guard > 200 {
                    return Ok(ExitTime { direction: dir.to_vec(), t: 0.0 });
                }
            }
        }
        for _ in 0..200 {
            if hi - lo <= self.cfg.exit_tol * hi.max(1.0) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if member(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let k = self.cfg.star_samples;
        if (1..k).any(|i| !member(lo * i as f64 / k as f64)) {
            return Err(Error::StarConvexityViolation(dir.to_vec()));
        }
        Ok(ExitTime { direction: dir.to_vec(), t: 0.5 * (lo + hi) })
    }

    /// Fiberwise radial factor `r_{E′(p)}(u) / r_{E(p)}(u)`; 1 over the origin and over `dQ`.
    fn rescale_factor(&self, p: &[f64], centered: &HPolytope, y: &[f64]) -> Result<f64> {
        let s = base_gauge(p);
        let len = norm(y);
        if s == 0.0 || s >= 1.0 - self.cfg.boundary_band || len == 0.0 {
            return Ok(1.0);
        }
        let u = scale(y, 1.0 / len);
        let (q, s) = radial_project_base(p)?;
        let join = self.join_towards(&q)?;
        let r_join = join.radial(s, &u);
        let r_fiber = centered.radial(&u);
        if !(r_join.is_finite() && r_fiber.is_finite()) || r_fiber <= 0.0 {
            return Err(Error::Domain(format!("origin is not interior to the fiber over {p:?}")));
        }
        Ok(r_join / r_fiber)
    }

    /// Maps `(p, y)` with `p ∈ Q`, `y ∈ E(p)` into the closed half-ball.
    pub fn to_half_ball(&self, p: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        self.check_in_cube(p)?;
        if y.len() != self.fiber_dim() {
            return Err(Error::Validation("fiber point has the wrong dimension".into()));
        }
        let raw = self.oracle.inner.fiber(p)?;
        let slack = self.cfg.domain_tol * raw.scale().max(1.0);
        if raw.violation(y) > slack {
            return Err(Error::Domain(format!("fiber point {y:?} is outside the fiber over {p:?}")));
        }
        let (centered, c) = self.oracle.centered(p)?;
        let yc = sub(y, &c);
        let f = self.rescale_factor(p, &centered, &yc)?;
        let mut w = p.to_vec();
        w.extend(scale(&yc, f));
        let len = norm(&w);
        if len == 0.0 {
            return Ok(w);
        }
        let t = self.exit_time(&w)?.t;
        Ok(scale(&w, 1.0 / t))
    }

    /// Inverse of [`Convexoid::to_half_ball`].
    pub fn from_half_ball(&self, z: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let b = self.base_dim();
        if z.len() != self.dim() {
            return Err(Error::Validation("half-ball point has the wrong dimension".into()));
        }
        let len = norm(z);
        if len > 1.0 + 1e-9 || z[0] < -1e-9 {
            return Err(Error::Domain(format!("{z:?} is outside the closed half-ball")));
        }
        let (p, y_join) = if len == 0.0 {
            (vec![0.0; b], vec![0.0; self.fiber_dim()])
        } else {
            let mut dir = scale(z, 1.0 / len);
            dir[0] = dir[0].max(0.0);
            let t = self.exit_time(&dir)?.t;
            let w = scale(&dir, len.min(1.0) * t);
            let mut p = w[..b].to_vec();
            p[0] = p[0].clamp(0.0, 1.0);
            for x in &mut p[1..] {
                *x = x.clamp(-1.0, 1.0);
            }
            (p, w[b..].to_vec())
        };
        let (centered, c) = self.oracle.centered(&p)?;
        let f = self.rescale_factor(&p, &centered, &y_join)?;
        Ok((p, add(&scale(&y_join, 1.0 / f), &c)))
    }
}

/// Half-ball `{h ≥ 0, |(h,x)| ≤ 1}` to cylinder `[0,1] × B^{l−1}` by gauge rescaling from the
/// common interior point `(1/2, 0)`. The bottom disc is fixed pointwise.
pub fn half_ball_to_cylinder(z: &[f64]) -> Vec<f64> {
    gauge_swap(z, half_ball_reach, cylinder_reach)
}

pub fn cylinder_to_half_ball(c: &[f64]) -> Vec<f64> {
    gauge_swap(c, cylinder_reach, half_ball_reach)
}

fn gauge_swap(z: &[f64], from: fn(&[f64]) -> f64, to: fn(&[f64]) -> f64) -> Vec<f64> {
    let mut d = z.to_vec();
    d[0] -= 0.5;
    if norm(&d) == 0.0 {
        return z.to_vec();
    }
    let mut out = scale(&d, to(&d) / from(&d));
    out[0] += 0.5;
    out
}

/// `sup{λ : (1/2,0) + λd ∈ HB}`.
fn half_ball_reach(d: &[f64]) -> f64 {
    let dh = d[0];
    let dd = dot(d, d);
    let sphere = (-dh + (dh * dh + 3.0 * dd).sqrt()) / (2.0 * dd);
    if dh < 0.0 {
        sphere.min(0.5 / -dh)
    } else {
        sphere
    }
}

/// `sup{λ : (1/2,0) + λd ∈ [0,1] × B}`.
fn cylinder_reach(d: &[f64]) -> f64 {
    let mut r = f64::INFINITY;
    if d[0] != 0.0 {
        r = r.min(0.5 / d[0].abs());
    }
    let side = norm(&d[1..]);
    if side > 0.0 {
        r = r.min(1.0 / side);
    }
    r
}

/// Cylinder `[0,2] × B^{l−1}` onto the unit ball by radial gauge rescaling about `(1,0)`.
pub fn cylinder_to_ball(c: &[f64]) -> Vec<f64> {
    let mut u = c.to_vec();
    u[0] -= 1.0;
    let len = norm(&u);
    if len == 0.0 {
        return u;
    }
    let g = u[0].abs().max(norm(&u[1..]));
    scale(&u, g / len)
}

pub fn ball_to_cylinder(b: &[f64]) -> Vec<f64> {
    let len = norm(b);
    let mut out = if len == 0.0 {
        b.to_vec()
    } else {
        let d = scale(b, 1.0 / len);
        let g = d[0].abs().max(norm(&d[1..]));
        scale(&d, len / g)
    };
    out[0] += 1.0;
    out
}

/// Which convexoid of a glued pair a point belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    E,
    F,
}

/// Identification of the bottoms: `(x, y)` with `x` the bottom-face base coordinates (the base
/// point is `(0, x)`) and `y` the raw fiber coordinates.
pub trait BottomIdentification: Send + Sync {
    fn e_to_f(&self, x: &[f64], y: &[f64]) -> Result<(Vec<f64>, Vec<f64>)>;
    fn f_to_e(&self, x: &[f64], y: &[f64]) -> Result<(Vec<f64>, Vec<f64>)>;
}

/// Two convexoids of equal dimension glued along their bottoms, mapped onto the closed ball.
///
/// `E` goes to the cylinder slab `[0,1] × B` with its bottom on `{1} × B`, `F` to `[1,2] × B`.
/// The `F` slab is reparametrized by `ψ × id`, where `ψ` is the homeomorphism of `B` induced by
/// the identification on the shared slice, so the two halves agree there.
pub struct Gluing<A, B, P> {
    pub e: Convexoid<A>,
    pub f: Convexoid<B>,
    pub phi: P,
}

impl<A: FiberOracle, B: FiberOracle, P: BottomIdentification> Gluing<A, B, P> {
    pub fn new(e: Convexoid<A>, f: Convexoid<B>, phi: P) -> Result<Self> {
        if e.dim() != f.dim() {
            return Err(Error::Gluing(format!("dimensions differ: {} vs {}", e.dim(), f.dim())));
        }
        Ok(Gluing { e, f, phi })
    }

    pub fn dim(&self) -> usize {
        self.e.dim()
    }

    fn bottom_of<O: FiberOracle>(c: &Convexoid<O>, w: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let mut z = vec![0.0];
        z.extend_from_slice(w);
        let (p, y) = c.from_half_ball(&z)?;
        Ok((p[1..].to_vec(), y))
    }

    fn onto_bottom<O: FiberOracle>(c: &Convexoid<O>, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        let mut p = vec![0.0];
        p.extend_from_slice(x);
        Ok(c.to_half_ball(&p, y)?[1..].to_vec())
    }

    /// Shared-slice coordinate of F's bottom point `w`, as seen from E.
    pub fn psi(&self, w: &[f64]) -> Result<Vec<f64>> {
        let (x, y) = Self::bottom_of(&self.f, w)?;
        let (xe, ye) = self.phi.f_to_e(&x, &y)?;
        Self::onto_bottom(&self.e, &xe, &ye)
    }

    pub fn psi_inverse(&self, w: &[f64]) -> Result<Vec<f64>> {
        let (x, y) = Self::bottom_of(&self.e, w)?;
        let (xf, yf) = self.phi.e_to_f(&x, &y)?;
        Self::onto_bottom(&self.f, &xf, &yf)
    }

    pub fn to_ball(&self, side: Side, p: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        let c = match side {
            Side::E => {
                let mut c = half_ball_to_cylinder(&self.e.to_half_ball(p, y)?);
                c[0] = 1.0 - c[0];
                c
            }
            Side::F => {
                let c = half_ball_to_cylinder(&self.f.to_half_ball(p, y)?);
                let mut out = vec![1.0 + c[0]];
                out.extend(self.psi(&c[1..])?);
                out
            }
        };
        Ok(cylinder_to_ball(&c))
    }

    pub fn from_ball(&self, b: &[f64]) -> Result<(Side, Vec<f64>, Vec<f64>)> {
        if b.len() != self.dim() {
            return Err(Error::Validation("ball point has the wrong dimension".into()));
        }
        if norm(b) > 1.0 + 1e-9 {
            return Err(Error::Domain(format!("{b:?} is outside the closed ball")));
        }
        let c = ball_to_cylinder(b);
        if c[0] <= 1.0 {
            let mut h = c.clone();
            h[0] = (1.0 - c[0]).max(0.0);
            let (p, y) = self.e.from_half_ball(&cylinder_to_half_ball(&h))?;
            Ok((Side::E, p, y))
        } else {
            let mut h = vec![c[0] - 1.0];
            h.extend(self.psi_inverse(&c[1..])?);
            let (p, y) = self.f.from_half_ball(&cylinder_to_half_ball(&h))?;
            Ok((Side::F, p, y))
        }
    }

    /// Checks on the given shared-slice samples that the identification round-trips.
    /// Returns the largest discrepancy, or a gluing error above `tol`.
    pub fn validate_bottom(&self, samples: &[Vec<f64>], tol: f64) -> Result<f64> {
        let mut worst = 0.0f64;
        for w in samples {
            let back = self.psi(&self.psi_inverse(w)?)?;
            worst = worst.max(norm(&sub(&back, w)));
        }
        if worst > tol {
            return Err(Error::Gluing(format!("bottom identification round trip off by {worst:e}")));
        }
        Ok(worst)
    }
}

//! Numerical homeomorphism from G(k,n)≥0 onto the closed ball of dimension k(n−k).
//!
//! For `k ∈ {1, n−1}` the space is a simplex of normalized coefficient vectors, sent to the ball
//! by radial gauge rescaling about its barycenter. Otherwise the chamber split is used: the part
//! `t ≤ 1/2` (side E) fibers over G(k,n−1)≥0 with fiber the η ⊂ ω, the part `t ≥ 1/2` (side F)
//! over G(k−1,n−1)≥0 with fiber the ω ⊃ η. Each side is a convexoid over
//! `[0,1] × cube` (first coordinate `|2t−1|`, the rest the recursive chart of the base factor
//! pushed to the cube) and the two glue along `t = 1/2`.

use std::sync::Arc;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::chamber::{self, ChamberPoint, LinearFiber, SplitTriple};
use crate::convexoid::{BottomIdentification, Convexoid, ConvexoidConfig, FiberOracle, Gluing, Side};
use crate::error::{Error, Result};
use crate::exterior::{binomial, IndexSet, MultiVector};
use crate::polytope::{norm, scale, HPolytope};
use crate::rational::{self, Rational};

/// Coordinates in the closed unit ball of dimension k(n−k).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint {
    pub coords: Vec<f64>,
}

/// Tolerances for chart evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartConfig {
    pub convexoid: ConvexoidConfig,
}

impl Default for ChartConfig {
    fn default() -> Self {
        ChartConfig {
            convexoid: ConvexoidConfig {
                exit_tol: 1e-14,
                domain_tol: 1e-6,
                boundary_band: EDGE_SNAP,
                ..ConvexoidConfig::default()
            },
        }
    }
}

/// Ball to cube by sending each sphere of radius r to the cube boundary of sup-norm r.
pub fn ball_to_cube(z: &[f64]) -> Vec<f64> {
    let sup = z.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if sup == 0.0 {
        return z.to_vec();
    }
    scale(z, norm(z) / sup)
}

pub fn cube_to_ball(x: &[f64]) -> Vec<f64> {
    let len = norm(x);
    if len == 0.0 {
        return x.to_vec();
    }
    let sup = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    scale(x, sup / len)
}

/// Chart of G(k,n)≥0.
pub struct BallChart {
    k: usize,
    n: usize,
    kind: Kind,
}

enum Kind {
    Point(MultiVector),
    Simplex,
    Glued(Box<Gluing<FactorFibers, FactorFibers, Bottom>>),
}

impl BallChart {
    pub fn new(k: usize, n: usize, cfg: &ChartConfig) -> Result<Self> {
        if k > n || n == 0 {
            return Err(Error::Validation(format!("no Grassmannian G({k},{n})")));
        }
        let kind = if k == 0 {
            Kind::Point(MultiVector::scalar(n, Rational::one()))
        } else if k == n {
            Kind::Point(MultiVector::basis(n, &(1..=n).collect::<Vec<_>>())?)
        } else if k == 1 || k + 1 == n {
            Kind::Simplex
        } else {
            let sub_e = Arc::new(BallChart::new(k, n - 1, cfg)?);
            let sub_f = Arc::new(BallChart::new(k - 1, n - 1, cfg)?);
            let e = FactorFibers { side: Side::E, base: sub_e.clone(), fiber_dim: k - 1 };
            let f = FactorFibers { side: Side::F, base: sub_f.clone(), fiber_dim: n - k - 1 };
            let bottom = Bottom { e: e.clone(), f: f.clone() };
            let e = Convexoid::new(e, cfg.convexoid.clone())?;
            let f = Convexoid::new(f, cfg.convexoid.clone())?;
            Kind::Glued(Box::new(Gluing::new(e, f, bottom)?))
        };
        Ok(BallChart { k, n, kind })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Ball dimension k(n−k).
    pub fn dim(&self) -> usize {
        self.k * (self.n - self.k)
    }

    fn check(&self, p: &ChamberPoint) -> Result<()> {
        if p.k() != self.k || p.n() != self.n {
            return Err(Error::Validation(format!(
                "point of G({},{}) given to the chart of G({},{})",
                p.k(),
                p.n(),
                self.k,
                self.n
            )));
        }
        Ok(())
    }

    pub fn chart(&self, p: &ChamberPoint) -> Result<ChartPoint> {
        self.check(p)?;
        let coords = match &self.kind {
            Kind::Point(_) => Vec::new(),
            Kind::Simplex => simplex_to_ball(&p.rho().to_dense_f64()),
            Kind::Glued(g) => chart_glued(g, p, None)?,
        };
        Ok(ChartPoint { coords })
    }

    /// Chart of a point on the shared slice `t = 1/2`, evaluated through the given side.
    /// Both sides agree there up to the gluing tolerance.
    pub fn chart_from_side(&self, p: &ChamberPoint, side: Side) -> Result<ChartPoint> {
        self.check(p)?;
        match &self.kind {
            Kind::Glued(g) => Ok(ChartPoint { coords: chart_glued(g, p, Some(side))? }),
            _ => Err(Error::Validation(format!("G({},{}) is not glued from two sides", self.k, self.n))),
        }
    }

    pub fn inverse(&self, c: &ChartPoint) -> Result<ChamberPoint> {
        let z = &c.coords;
        if z.len() != self.dim() {
            return Err(Error::Validation(format!("expected {} chart coordinates, got {}", self.dim(), z.len())));
        }
        if z.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("chart coordinates must be finite".into()));
        }
        if norm(z) > 1.0 + 1e-9 {
            return Err(Error::Domain(format!("chart point of norm {} is outside the ball", norm(z))));
        }
        match &self.kind {
            Kind::Point(w) => ChamberPoint::new(w.clone()),
            Kind::Simplex => {
                let x = ball_to_simplex(z);
                ChamberPoint::new(rational_simplex_point(self.n, self.k, &x)?)
            }
            Kind::Glued(g) => inverse_glued(g, self.k, self.n, z),
        }
    }

    /// Max-norm coefficient error of `inverse(chart(p))`.
    pub fn round_trip_error(&self, p: &ChamberPoint) -> Result<f64> {
        let back = self.inverse(&self.chart(p)?)?;
        let diff = p.rho().to_dense_f64().iter().zip(back.rho().to_dense_f64()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        Ok(diff)
    }
}

pub fn ball_chart(p: &ChamberPoint) -> Result<ChartPoint> {
    BallChart::new(p.k(), p.n(), &ChartConfig::default())?.chart(p)
}

pub fn ball_chart_inverse(c: &ChartPoint, k: usize, n: usize) -> Result<ChamberPoint> {
    BallChart::new(k, n, &ChartConfig::default())?.inverse(c)
}

/// Orthonormal basis of the sum-zero hyperplane of ℝᴺ (Helmert vectors), as columns.
fn helmert(size: usize, j: usize) -> impl Iterator<Item = f64> {
    // column j (1-based): (1, …, 1, −j, 0, …) / √(j(j+1))
    let c = 1.0 / ((j * (j + 1)) as f64).sqrt();
    (0..size).map(move |i| match i.cmp(&j) {
        std::cmp::Ordering::Less => c,
        std::cmp::Ordering::Equal => -(j as f64) * c,
        std::cmp::Ordering::Greater => 0.0,
    })
}

/// `sup{λ : 1/N + λu ≥ 0}` inverted: the simplex gauge of a sum-zero direction.
fn simplex_gauge(u: &[f64]) -> f64 {
    let size = u.len() as f64;
    u.iter().fold(0.0f64, |m, x| m.max(-size * x))
}

fn simplex_to_ball(x: &[f64]) -> Vec<f64> {
    let size = x.len();
    let u: Vec<f64> = x.iter().map(|v| v - 1.0 / size as f64).collect();
    let len = norm(&u);
    let h: Vec<f64> = (1..size).map(|j| helmert(size, j).zip(&u).map(|(a, b)| a * b).sum()).collect();
    if len == 0.0 {
        return h;
    }
    scale(&h, simplex_gauge(&u) / len)
}

fn ball_to_simplex(z: &[f64]) -> Vec<f64> {
    let size = z.len() + 1;
    let len = norm(z);
    let base = vec![1.0 / size as f64; size];
    if len == 0.0 {
        return base;
    }
    let mut d = vec![0.0; size];
    for (j, zj) in z.iter().enumerate() {
        for (di, hi) in d.iter_mut().zip(helmert(size, j + 1)) {
            *di += hi * zj / len;
        }
    }
    let g = simplex_gauge(&d);
    base.iter().zip(&d).map(|(b, di)| b + len.min(1.0) * di / g).collect()
}

/// Coefficients below this are read as exact zeros, so boundary points survive a round trip
/// exactly; fibers over the boundary can differ sharply from fibers over nearby interior points.
pub const SNAP: f64 = 1e-10;

/// Exact normalized nonnegative k-vector with the given approximate lex-ordered coefficients.
fn rational_simplex_point(n: usize, k: usize, x: &[f64]) -> Result<MultiVector> {
    debug_assert_eq!(x.len(), binomial(n, k));
    let vals = x
        .iter()
        .map(|&v| rational::from_f64(if v < SNAP { 0.0 } else { v }))
        .collect::<Result<Vec<_>>>()?;
    MultiVector::from_dense(n, k, &vals)?.normalize()
}

/// Base cube coordinates this close to ±1 are read as lying on the cube boundary.
pub const EDGE_SNAP: f64 = 1e-8;

/// Fibers of one side: `(τ, x) ↦ (1−τ)·(fiber over the base factor at x − vertex mean)`.
#[derive(Clone)]
struct FactorFibers {
    side: Side,
    base: Arc<BallChart>,
    fiber_dim: usize,
}

impl FactorFibers {
    /// Base factor at cube point `x` (on ℝ^{n−1}) with its fiber.
    fn at(&self, x: &[f64]) -> Result<(ChamberPoint, LinearFiber)> {
        let x: Vec<f64> = x.iter().map(|&v| if v.abs() > 1.0 - EDGE_SNAP { v.signum() } else { v }).collect();
        let factor = self.base.inverse(&ChartPoint { coords: cube_to_ball(&x) })?;
        let fiber = self.fiber_of(factor.rho())?;
        Ok((factor, fiber))
    }

    fn fiber_of(&self, w: &MultiVector) -> Result<LinearFiber> {
        match self.side {
            Side::E => LinearFiber::over_omega(w),
            Side::F => LinearFiber::over_eta(w),
        }
    }

    fn cube_of(&self, w: &MultiVector) -> Result<Vec<f64>> {
        let z = self.base.chart(&ChamberPoint::new(w.clone())?)?.coords;
        Ok(ball_to_cube(&z).into_iter().map(|x| x.clamp(-1.0, 1.0)).collect())
    }
}

impl FiberOracle for FactorFibers {
    fn base_dim(&self) -> usize {
        1 + self.base.dim()
    }

    fn fiber_dim(&self) -> usize {
        self.fiber_dim
    }

    fn fiber(&self, p: &[f64]) -> Result<HPolytope> {
        let tau = p[0].clamp(0.0, 1.0);
        let (_, fiber) = self.at(&p[1..])?;
        Ok(fiber.ortho_polytope()?.scaled(1.0 - tau))
    }
}

/// The `t = 1/2` slice seen from both sides: `(ω, η ⊂ ω)` versus `(η, ω ⊃ η)`.
struct Bottom {
    e: FactorFibers,
    f: FactorFibers,
}

fn cross(from: &FactorFibers, to: &FactorFibers, x: &[f64], y: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let (factor, fiber) = from.at(x)?;
    let other = fiber.from_ortho(y, SNAP)?;
    let cube = to.cube_of(&other)?;
    let (_, back) = to.at(&cube)?;
    Ok((cube, inside_coords(&back, factor.rho())?))
}

/// Frame coordinates of the fiber point nearest to `w`. The fiber is the one the oracle sees, which
/// may sit over a slightly different (snapped) base factor than the one `w` came from.
fn inside_coords(fiber: &LinearFiber, w: &MultiVector) -> Result<Vec<f64>> {
    Ok(fiber.ortho_coords(&fiber.from_ortho(&fiber.ortho_coords(w), SNAP)?))
}

impl BottomIdentification for Bottom {
    fn e_to_f(&self, x: &[f64], y: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        cross(&self.e, &self.f, x, y)
    }

    fn f_to_e(&self, x: &[f64], y: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        cross(&self.f, &self.e, x, y)
    }
}

fn chart_glued(g: &Gluing<FactorFibers, FactorFibers, Bottom>, p: &ChamberPoint, force: Option<Side>) -> Result<Vec<f64>> {
    let s = chamber::split(p)?;
    let half = rational::frac(1, 2);
    if force.is_some() && s.t != half {
        return Err(Error::Validation(format!("t = {} is off the shared slice", s.t)));
    }
    let e_side = force.map_or(s.t <= half, |f| f == Side::E);
    // base factor, fiber point, τ = |2t − 1|
    let (side, oracle, base, inner) = if e_side {
        (Side::E, &g.e, s.omega.as_ref(), s.eta.as_ref())
    } else {
        (Side::F, &g.f, s.eta.as_ref(), s.omega.as_ref())
    };
    let oracle = oracle.oracle();
    let tau = rational::to_f64(&(&s.t * rational::int(2) - Rational::one()).abs());
    let base = base.expect("the base factor exists on its side").drop_first()?;
    let cube = oracle.cube_of(&base)?;
    let y = match inner {
        None => vec![0.0; oracle.fiber_dim],
        Some(w) => {
            let (_, fiber) = oracle.at(&cube)?;
            scale(&inside_coords(&fiber, &w.drop_first()?)?, 1.0 - tau)
        }
    };
    let mut point = vec![tau];
    point.extend(cube);
    g.to_ball(side, &point, &y)
}

fn inverse_glued(g: &Gluing<FactorFibers, FactorFibers, Bottom>, k: usize, n: usize, z: &[f64]) -> Result<ChamberPoint> {
    let (side, p, y) = g.from_ball(z)?;
    let oracle = match side {
        Side::E => g.e.oracle(),
        Side::F => g.f.oracle(),
    };
    let tau = p[0].clamp(0.0, 1.0);
    let (factor, fiber) = oracle.at(&p[1..])?;
    let degenerate = tau >= 1.0 - 1e-12;
    let inner = if degenerate {
        None
    } else {
        Some(fiber.from_ortho(&scale(&y, 1.0 / (1.0 - tau)), SNAP)?.lift_first())
    };
    let factor = factor.rho().lift_first();
    let tau = if degenerate { Rational::one() } else { rational::from_f64(tau)? };
    let two = rational::int(2);
    let (t, eta, omega) = match side {
        Side::E => ((Rational::one() - tau) / two, inner, Some(factor)),
        Side::F => ((Rational::one() + tau) / two, Some(factor), inner),
    };
    let triple = SplitTriple { t, eta, omega };
    let rho = chamber::assemble(&triple)?;
    debug_assert_eq!((rho.k(), rho.n()), (k, n));
    Ok(rho)
}

/// Lex-ordered index sets of G(k,n), matching the dense coefficient order.
pub fn coordinate_labels(n: usize, k: usize) -> Vec<IndexSet> {
    IndexSet::all(n, k).collect()
}

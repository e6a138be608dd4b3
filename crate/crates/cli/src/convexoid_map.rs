//! `convexoid-map`: a grid-interpolated convexoid and a list of points, mapped to the half-ball.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use nngr_core::convexoid::{base_gauge, Convexoid, ConvexoidConfig, FiberOracle, GridFiber};
use nngr_core::polytope::norm;

use crate::report::Check;

#[derive(Debug, Deserialize)]
pub struct MapInput {
    pub spec: GridFiber,
    pub points: Vec<BasePoint>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BasePoint {
    pub p: Vec<f64>,
    pub y: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct Mapped {
    pub p: Vec<f64>,
    pub y: Vec<f64>,
    pub z: Vec<f64>,
}

fn validate(c: &Convexoid<GridFiber>, input: &MapInput) -> Result<()> {
    let tol = c.config().domain_tol;
    for (i, pt) in input.points.iter().enumerate() {
        if pt.p.len() != c.base_dim() || pt.y.len() != c.fiber_dim() {
            bail!("point {i}: expected {} base and {} fiber coordinates", c.base_dim(), c.fiber_dim());
        }
        if pt.p.iter().chain(&pt.y).any(|x| !x.is_finite()) {
            bail!("point {i}: coordinates must be finite");
        }
        let in_cube = pt.p[0] >= -tol && base_gauge(&pt.p[1..]) <= 1.0 + tol && pt.p[0] <= 1.0 + tol;
        if !in_cube {
            bail!("point {i}: base point {:?} is outside the cube", pt.p);
        }
        let fiber = c.oracle().fiber(&pt.p).with_context(|| format!("point {i}: fiber"))?;
        if !fiber.contains(&pt.y, tol) {
            bail!("point {i}: {:?} is outside the fiber", pt.y);
        }
    }
    Ok(())
}

/// Maps every point; checks norm bound, round trip, bottom preservation and dQ to the sphere.
pub fn run(input: MapInput, tol: f64) -> Result<(Vec<Check>, Value)> {
    input.spec.validate()?;
    let c = Convexoid::new(input.spec.clone(), ConvexoidConfig::default())?;
    validate(&c, &input)?;
    let mut bound = Check::new("norm_at_most_one");
    let mut trip = Check::new("round_trip");
    let mut bottom = Check::new("bottom_to_bottom");
    let mut sphere = Check::new("distinguished_boundary_to_sphere");
    let mut mapped = Vec::with_capacity(input.points.len());
    for (i, pt) in input.points.iter().enumerate() {
        let z = match c.to_half_ball(&pt.p, &pt.y) {
            Ok(z) => z,
            Err(e) => {
                bound.record(false, || format!("point {i}: {e}"));
                continue;
            }
        };
        let r = norm(&z);
        bound.error((r - 1.0).max(0.0));
        bound.record(r <= 1.0 + 1e-9, || format!("point {i}: norm {r}"));
        match c.from_half_ball(&z) {
            Ok((p, y)) => {
                let e = p.iter().chain(&y).zip(pt.p.iter().chain(&pt.y)).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
                trip.error(e);
                trip.record(e <= tol, || format!("point {i}: round trip error {e:e}"));
            }
            Err(e) => trip.record(false, || format!("point {i}: {e}")),
        }
        if pt.p[0] == 0.0 {
            bottom.error(z[0].abs());
            bottom.record(z[0].abs() <= 1e-9, || format!("point {i}: first coordinate {}", z[0]));
        }
        if pt.p[0] == 1.0 || pt.p[1..].iter().any(|x| x.abs() == 1.0) {
            sphere.error((r - 1.0).abs());
            sphere.record((r - 1.0).abs() <= 1e-6, || format!("point {i}: norm {r}"));
        }
        mapped.push(Mapped { p: pt.p.clone(), y: pt.y.clone(), z });
    }
    Ok((vec![bound, trip, bottom, sphere], serde_json::to_value(mapped)?))
}

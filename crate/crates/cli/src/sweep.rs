//! Seeded sample sweeps: `roundtrip` (chart checks) and `selftest` (the whole pipeline).

use anyhow::{bail, Result};
use rayon::prelude::*;
use serde_json::{json, Value};

use nngr_core::chart::coordinate_labels;
use nngr_core::lemmas::Lemmas;
use nngr_core::plucker;
use nngr_core::polytope::{norm, sub};
use nngr_core::{assemble, split, BallChart, ChamberPoint, ChartConfig, MultiVector, SignClass, Sampler};

use crate::report::Check;

#[derive(Clone, Debug)]
pub struct SweepParams {
    pub k: usize,
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
}

impl SweepParams {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.k >= self.n {
            bail!("sweeps need 0 < k < n, got k = {}, n = {}", self.k, self.n);
        }
        if self.samples == 0 {
            bail!("--samples must be positive");
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            bail!("--tol must be a positive number");
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({"k": self.k, "n": self.n, "samples": self.samples, "seed": self.seed, "tol": self.tol})
    }
}

/// Even indices are Positive samples, odd ones boundary samples.
pub fn draw(p: &SweepParams) -> Result<Vec<(bool, ChamberPoint)>> {
    let mut s = Sampler::new(p.seed);
    (0..p.samples)
        .map(|i| {
            let positive = i % 2 == 0;
            let pt = if positive { s.positive_point(p.k, p.n)? } else { s.boundary_point(p.k, p.n)? };
            Ok((positive, pt))
        })
        .collect()
}

/// Chart evaluation of one sample.
#[derive(Clone, Debug)]
pub struct ChartSample {
    pub index: usize,
    pub positive: bool,
    pub input: Vec<f64>,
    pub coords: std::result::Result<Vec<f64>, String>,
    pub round_trip: std::result::Result<f64, String>,
}

pub fn chart_samples(chart: &BallChart, points: &[(bool, ChamberPoint)]) -> Vec<ChartSample> {
    points
        .par_iter()
        .enumerate()
        .map(|(index, (positive, p))| {
            let coords = chart.chart(p).map(|c| c.coords).map_err(|e| e.to_string());
            let round_trip = match &coords {
                Ok(c) => chart
                    .inverse(&nngr_core::ChartPoint { coords: c.clone() })
                    .map(|back| max_abs_diff(&p.rho().to_dense_f64(), &back.rho().to_dense_f64()))
                    .map_err(|e| e.to_string()),
                Err(e) => Err(e.clone()),
            };
            ChartSample { index, positive: *positive, input: p.rho().to_dense_f64(), coords, round_trip }
        })
        .collect()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

/// Chart checks over evaluated samples, in a fixed order.
pub fn chart_checks(p: &SweepParams, samples: &[ChartSample]) -> Vec<Check> {
    let dim = p.k * (p.n - p.k);
    let mut evaluated = Check::new("chart_evaluates");
    let mut dimension = Check::new("chart_dimension");
    let mut bound = Check::new("norm_at_most_one");
    let mut trip = Check::new("round_trip");
    let mut interior = Check::new("positive_inside_ball");
    let mut near = Check::soft("boundary_near_sphere");
    let mut injective = Check::new("injective_on_samples");
    for s in samples {
        let i = s.index;
        evaluated.record(s.coords.is_ok(), || format!("sample {i}: {}", s.coords.as_ref().err().unwrap()));
        let Ok(c) = &s.coords else { continue };
        let r = norm(c);
        dimension.record(c.len() == dim, || format!("sample {i}: {} coordinates", c.len()));
        bound.error((r - 1.0).max(0.0));
        bound.record(r <= 1.0 + 1e-9, || format!("sample {i}: norm {r}"));
        if s.positive {
            interior.record(r < 1.0, || format!("sample {i}: positive point at norm {r}"));
        } else {
            near.error((1.0 - r).max(0.0));
            near.record(r >= 1.0 - 1e-4, || format!("sample {i}: boundary point at norm {r}"));
        }
        match &s.round_trip {
            Ok(e) => {
                trip.error(*e);
                trip.record(*e <= p.tol, || format!("sample {i}: round trip error {e:e}"));
            }
            Err(e) => trip.record(false, || format!("sample {i}: {e}")),
        }
    }
    // all pairs of inputs at least 1e-8 apart must have distinct images
    let ok: Vec<(&Vec<f64>, &Vec<f64>)> = samples.iter().filter_map(|s| s.coords.as_ref().ok().map(|c| (&s.input, c))).collect();
    let mut margin = f64::INFINITY;
    for a in 0..ok.len() {
        for b in a + 1..ok.len() {
            if max_abs_diff(ok[a].0, ok[b].0) >= 1e-8 {
                let d = norm(&sub(ok[a].1, ok[b].1));
                margin = margin.min(d);
                injective.record(d > 0.0, || format!("samples {a} and {b} share an image"));
            }
        }
    }
    if margin.is_finite() {
        injective.detail.get_or_insert_with(|| format!("minimum image separation {margin:e}"));
    }
    vec![evaluated, dimension, bound, trip, interior, near, injective]
}

/// Per-sample CSV: index, kind, input coefficients, chart coordinates, round-trip error.
pub fn csv_bytes(p: &SweepParams, samples: &[ChartSample]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["index".to_string(), "kind".to_string()];
    header.extend(coordinate_labels(p.n, p.k).iter().map(|a| format!("rho[{a}]")));
    header.extend((1..=p.k * (p.n - p.k)).map(|i| format!("z{i}")));
    header.push("round_trip_error".into());
    w.write_record(&header)?;
    for s in samples {
        let mut row = vec![s.index.to_string(), if s.positive { "positive" } else { "boundary" }.to_string()];
        row.extend(s.input.iter().map(f64::to_string));
        match &s.coords {
            Ok(c) => row.extend(c.iter().map(f64::to_string)),
            Err(_) => row.extend(std::iter::repeat_n(String::new(), p.k * (p.n - p.k))),
        }
        row.push(s.round_trip.as_ref().map_or_else(|_| String::new(), f64::to_string));
        w.write_record(&row)?;
    }
    Ok(w.into_inner()?)
}

pub fn roundtrip(p: &SweepParams) -> Result<(Vec<Check>, Vec<ChartSample>)> {
    p.validate()?;
    let chart = BallChart::new(p.k, p.n, &ChartConfig::default())?;
    let points = draw(p)?;
    let samples = chart_samples(&chart, &points);
    Ok((chart_checks(p, &samples), samples))
}

struct AlgebraSample {
    valid: Result<(), String>,
    split: Result<(), String>,
    shrink: Result<(), String>,
    extend: Result<(), String>,
}

fn witness_ok(omega: &MultiVector, eta: &MultiVector, up: bool, positive: bool) -> Result<(), String> {
    let inside = if up { plucker::contains(omega, eta) } else { plucker::contains(eta, omega) };
    if !inside.map_err(|e| e.to_string())? {
        return Err(format!("{eta} is not in containment with {omega}"));
    }
    let sign = eta.classify_sign();
    let ok = if positive { sign == SignClass::Positive } else { sign.is_nonnegative() };
    if !ok {
        return Err(format!("{eta} has sign class {sign}"));
    }
    Ok(())
}

fn algebra_sample(p: &ChamberPoint, positive: bool, lemmas: &Lemmas) -> AlgebraSample {
    let w = p.rho();
    let valid = match plucker::is_decomposable(w) {
        Ok(true) if w.is_normalized() && w.classify_sign().is_nonnegative() => Ok(()),
        Ok(_) => Err(format!("{w} is not a normalized nonnegative decomposable k-vector")),
        Err(e) => Err(e.to_string()),
    };
    let split = match split(p).and_then(|s| assemble(&s)) {
        Ok(q) if &q == p => Ok(()),
        Ok(q) => Err(format!("assemble(split(ρ)) = {} differs from ρ = {w}", q.rho())),
        Err(e) => Err(e.to_string()),
    };
    let down = if positive { lemmas.shrink_positive(w) } else { lemmas.shrink_nonneg(w) };
    let up = if positive { lemmas.extend_positive(w) } else { lemmas.extend_nonneg(w) };
    let shrink = down.map_err(|e| e.to_string()).and_then(|x| witness_ok(w, &x.eta, false, positive));
    let extend = up.map_err(|e| e.to_string()).and_then(|x| witness_ok(w, &x.eta, true, positive));
    AlgebraSample { valid, split, shrink, extend }
}

pub fn selftest(p: &SweepParams, lemmas: &Lemmas) -> Result<(Vec<Check>, Vec<ChartSample>)> {
    p.validate()?;
    let chart = BallChart::new(p.k, p.n, &ChartConfig::default())?;
    let points = draw(p)?;
    let algebra: Vec<AlgebraSample> = points.par_iter().map(|(pos, pt)| algebra_sample(pt, *pos, lemmas)).collect();
    let mut valid = Check::new("sample_valid");
    let mut split = Check::new("split_assemble_exact");
    let mut shrink = Check::new("shrink_witness");
    let mut extend = Check::new("extend_witness");
    for (i, a) in algebra.iter().enumerate() {
        for (check, r) in [(&mut valid, &a.valid), (&mut split, &a.split), (&mut shrink, &a.shrink), (&mut extend, &a.extend)] {
            check.record(r.is_ok(), || format!("sample {i}: {}", r.as_ref().unwrap_err()));
        }
    }
    let samples = chart_samples(&chart, &points);
    let mut checks = vec![valid, split, shrink, extend];
    checks.extend(chart_checks(p, &samples));
    Ok((checks, samples))
}

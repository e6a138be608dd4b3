//! Single-shot algebra commands. Each validates its input completely before computing.

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::Value;

use nngr_core::lemmas::{EpsilonSearch, Lemmas};
use nngr_core::plucker::{self, plucker_of_matrix};
use nngr_core::{assemble, split, BallChart, ChamberPoint, ChartConfig, ChartPoint, MultiVector, PlaneMatrix, SignClass, SplitTriple};

use crate::input;

pub fn to_value<T: Serialize>(x: &T) -> Result<Value> {
    Ok(serde_json::to_value(x)?)
}

pub fn wedge(args: &[String]) -> Result<Value> {
    if args.is_empty() {
        bail!("wedge needs at least one multivector");
    }
    let factors: Vec<MultiVector> = args.iter().map(|a| input::parse(a, "multivector")).collect::<Result<_>>()?;
    let n = factors[0].n();
    if let Some(f) = factors.iter().find(|f| f.n() != n) {
        bail!("ambient dimensions differ: {} vs {}", n, f.n());
    }
    let total: usize = factors.iter().map(MultiVector::grade).sum();
    if total > n {
        bail!("total grade {total} exceeds ambient dimension {n}");
    }
    to_value(&MultiVector::wedge_all(n, &factors)?)
}

pub fn plucker(arg: &str, normalize: bool) -> Result<Value> {
    let m: PlaneMatrix = input::parse(arg, "plane matrix")?;
    let w = plucker_of_matrix(&m);
    if normalize {
        return to_value(&plucker::canonical_representative(&w));
    }
    to_value(&w)
}

#[derive(Serialize)]
struct Summary {
    decomposable: bool,
    sign: SignClass,
    normalized: bool,
}

/// Summary of a k-vector, and whether it is a point of G(k,n)≥0 up to scale.
pub fn check(arg: &str) -> Result<(Value, bool)> {
    let w: MultiVector = input::parse(arg, "multivector")?;
    let decomposable = !w.is_zero() && plucker::is_decomposable(&w)?;
    let s = Summary { decomposable, sign: w.classify_sign(), normalized: w.is_normalized() };
    let ok = s.decomposable && s.sign.is_nonnegative();
    Ok((to_value(&s)?, ok))
}

pub fn lemmas(epsilon: EpsilonSearch) -> Result<Lemmas> {
    Lemmas::new(epsilon, true).context("invalid epsilon schedule")
}

pub fn shrink(arg: &str, positive: bool, lemmas: &Lemmas) -> Result<Value> {
    let w: MultiVector = input::parse(arg, "multivector")?;
    let out = if positive { lemmas.shrink_positive(&w)? } else { lemmas.shrink_nonneg(&w)? };
    to_value(&out.eta)
}

pub fn extend(arg: &str, positive: bool, lemmas: &Lemmas) -> Result<Value> {
    let w: MultiVector = input::parse(arg, "multivector")?;
    let out = if positive { lemmas.extend_positive(&w)? } else { lemmas.extend_nonneg(&w)? };
    to_value(&out.eta)
}

pub fn split_point(arg: &str) -> Result<Value> {
    let p: ChamberPoint = input::parse(arg, "chamber point")?;
    to_value(&split(&p)?)
}

pub fn assemble_triple(arg: &str) -> Result<Value> {
    let s: SplitTriple = input::parse(arg, "split triple")?;
    to_value(&assemble(&s)?)
}

pub fn chart(arg: &str) -> Result<Value> {
    let p: ChamberPoint = input::parse(arg, "chamber point")?;
    let c = BallChart::new(p.k(), p.n(), &ChartConfig::default())?;
    to_value(&c.chart(&p)?)
}

pub fn chart_inverse(arg: &str, k: usize, n: usize) -> Result<Value> {
    let z: ChartPoint = input::parse(arg, "chart point")?;
    let c = BallChart::new(k, n, &ChartConfig::default())?;
    to_value(&c.inverse(&z)?)
}

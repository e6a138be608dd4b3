//! Acceptance run: one PASS/FAIL line per criterion. Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use nngr_core::chamber::LinearFiber;
use nngr_core::convexoid::{BottomIdentification, ConstantFiber, Convexoid, ConvexoidConfig, Gluing, Side};
use nngr_core::exterior::{IndexSet, MultiVector, SignClass};
use nngr_core::lemmas::{extend_chain, shrink_chain, Lemmas};
use nngr_core::linalg;
use nngr_core::plucker::{self, plucker_of_matrix, PlaneMatrix};
use nngr_core::polytope::{norm, sub, HPolytope};
use nngr_core::rational::{frac, int};
use nngr_core::{assemble, split, BallChart, ChamberPoint, ChartConfig, Rational, Result, Sampler, SplitTriple};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: &[String], detail: String) -> Outcome {
    match failures.first() {
        None => Outcome { pass: true, detail },
        Some(f) => Outcome { pass: false, detail: format!("{detail}; {} failure(s), first: {f}", failures.len()) },
    }
}

fn budget(failures: &mut Vec<String>, elapsed: Duration, limit: Duration) {
    if elapsed > limit {
        failures.push(format!("took {elapsed:?}, budget {limit:?}"));
    }
}

fn random_rational(s: &mut Sampler) -> Rational {
    frac(s.rng().gen_range(-6..=6), s.rng().gen_range(1..=5))
}

fn random_matrix(s: &mut Sampler, k: usize, n: usize) -> PlaneMatrix {
    loop {
        let rows: Vec<Vec<Rational>> = (0..k).map(|_| (0..n).map(|_| int(s.rng().gen_range(-4..=4))).collect()).collect();
        if linalg::rank(&rows) == k {
            return PlaneMatrix::new(n, rows).unwrap();
        }
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

// 1. exterior algebra

fn exterior_case(s: &mut Sampler) -> Result<Option<String>> {
    let n = s.rng().gen_range(1..=6);
    let j = s.rng().gen_range(0..=n);
    let k = s.rng().gen_range(0..=n - j);
    let l = s.rng().gen_range(0..=n - j - k);
    let (a, b, c) = (s.multivector(n, j), s.multivector(n, k), s.multivector(n, l));

    let ab = a.wedge(&b)?;
    let ba = b.wedge(&a)?;
    let ba = if (j * k) % 2 == 1 { -&ba } else { ba };
    if ab != ba {
        return Ok(Some(format!("antisymmetry fails for grades {j},{k} in n={n}")));
    }
    if ab.wedge(&c)? != a.wedge(&b.wedge(&c)?)? {
        return Ok(Some(format!("associativity fails for grades {j},{k},{l} in n={n}")));
    }

    if j >= 1 {
        let v = s.multivector(n, 1);
        let lhs_form = a.contract(&v)?;
        for xi in IndexSet::all(n, j - 1) {
            let xi = MultiVector::basis(n, xi.elements())?;
            if lhs_form.inner(&xi)? != a.inner(&v.wedge(&xi)?)? {
                return Ok(Some(format!("adjunction fails at grade {j} in n={n}")));
            }
        }
    }

    if a.complement().classify_sign() != a.classify_sign() {
        return Ok(Some(format!("complement changes the sign class of {a}")));
    }
    if n >= 2 {
        let kk = s.rng().gen_range(1..n);
        for p in [s.positive_point(kk, n)?.into_inner(), s.boundary_point(kk, n)?.into_inner()] {
            if p.complement().classify_sign() != p.classify_sign() {
                return Ok(Some(format!("complement changes the sign class of {p}")));
            }
        }
    }

    let basis: Vec<MultiVector> = IndexSet::all(n, j).map(|x| MultiVector::basis(n, x.elements())).collect::<Result<_>>()?;
    for x in &basis {
        let row: Vec<Rational> = basis.iter().map(|y| x.q_form(y)).collect::<Result<_>>()?;
        let units = row.iter().filter(|q| q.abs().is_one()).count();
        let zeros = row.iter().filter(|q| q.is_zero()).count();
        if units != 1 || zeros + 1 != row.len() {
            return Ok(Some(format!("q_form Gram row of {x} is not a signed unit vector")));
        }
    }
    let cols_ok = (0..basis.len()).all(|c| {
        basis.iter().filter(|x| !x.q_form(&basis[c]).unwrap().is_zero()).count() == 1
    });
    if !cols_ok {
        return Ok(Some(format!("q_form Gram matrix for n={n}, grade {j} is not a permutation pattern")));
    }
    Ok(None)
}

fn criterion_exterior() -> Outcome {
    let start = Instant::now();
    let mut s = Sampler::new(0xE1);
    let mut failures = Vec::new();
    for _ in 0..1000 {
        match exterior_case(&mut s) {
            Ok(None) => {}
            Ok(Some(f)) => failures.push(f),
            Err(e) => failures.push(e.to_string()),
        }
    }
    let elapsed = start.elapsed();
    budget(&mut failures, elapsed, Duration::from_secs(10));
    outcome(&failures, format!("1000 cases, n <= 6, {elapsed:.2?}"))
}

// 2. Plücker coordinates

/// Whether `r` is a combination of the rows of `m`, by solving `Σ xᵢ mᵢ = r` exactly.
fn solvable(m: &[Vec<Rational>], r: &[Rational]) -> bool {
    let (k, n) = (m.len(), r.len());
    // augmented system: n equations in k unknowns
    let mut a: Vec<Vec<Rational>> = (0..n).map(|c| m.iter().map(|row| row[c].clone()).chain([r[c].clone()]).collect()).collect();
    let mut row = 0;
    for col in 0..k {
        let Some(p) = (row..n).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(row, p);
        let piv = a[row][col].clone();
        let pivot = a[row].clone();
        for (i, r) in a.iter_mut().enumerate() {
            if i != row && !r[col].is_zero() {
                let f = &r[col] / &piv;
                for (x, y) in r[col..=k].iter_mut().zip(&pivot[col..=k]) {
                    *x -= &f * y;
                }
            }
        }
        row += 1;
    }
    a[row..].iter().all(|eq| eq[k].is_zero())
}

fn plucker_case(s: &mut Sampler, i: usize) -> Result<Option<String>> {
    let n = s.rng().gen_range(2..=6);
    let k = s.rng().gen_range(1..n);
    let m = random_matrix(s, k, n);
    let w = plucker_of_matrix(&m);

    if !plucker::is_decomposable(&w)? {
        return Ok(Some(format!("minors of a rank-{k} matrix judged non-decomposable: {w}")));
    }
    let g = random_matrix(s, k, k);
    let lhs = plucker_of_matrix(&m.left_mul(g.rows())?);
    if lhs != w.scaled(&linalg::det(g.rows())) {
        return Ok(Some("minors are not det-equivariant".into()));
    }
    let back = plucker_of_matrix(&plucker::spanning_vectors(&w)?);
    let (a, c) = back.terms().next().expect("nonzero");
    let ratio = c / w.coeff(a);
    if ratio.is_zero() || back != w.scaled(&ratio) {
        return Ok(Some(format!("spanning vectors of {w} do not reproduce it")));
    }

    // containment against the row-solving oracle
    let j = s.rng().gen_range(1..=k);
    let rows = if i.is_multiple_of(2) {
        random_matrix(s, j, n).rows().to_vec()
    } else {
        loop {
            let c: Vec<Vec<Rational>> = (0..j).map(|_| (0..k).map(|_| random_rational(s)).collect()).collect();
            // left_mul rejects rank-deficient products
            if let Ok(sub) = m.left_mul(&c) {
                break sub.rows().to_vec();
            }
        }
    };
    let eta = plucker_of_matrix(&PlaneMatrix::new(n, rows.clone())?);
    let expected = rows.iter().all(|r| solvable(m.rows(), r));
    if plucker::contains(&eta, &w)? != expected {
        return Ok(Some(format!("contains({eta}, {w}) disagrees with the oracle ({expected})")));
    }
    Ok(None)
}

fn non_decomposable(s: &mut Sampler, i: usize) -> MultiVector {
    if i % 3 == 2 {
        // x·e_A + y·e_{A∁} in Λ³ℝ⁶
        let mut idx: Vec<usize> = (1..=6).collect();
        idx.shuffle(s.rng());
        let (mut a, mut b) = (idx[..3].to_vec(), idx[3..].to_vec());
        a.sort();
        b.sort();
        let x = frac(s.rng().gen_range(1..=5), s.rng().gen_range(1..=3));
        let y = -frac(s.rng().gen_range(1..=5), s.rng().gen_range(1..=3));
        return MultiVector::from_pairs(6, 3, &[(&a, x), (&b, y)]).unwrap();
    }
    let n = s.rng().gen_range(4..=6);
    loop {
        let w = s.multivector(n, 2);
        if w.classify_sign() == SignClass::Mixed && !w.wedge(&w).unwrap().is_zero() {
            return w;
        }
    }
}

fn criterion_plucker() -> Outcome {
    let start = Instant::now();
    let mut s = Sampler::new(0xE2);
    let mut failures = Vec::new();
    for i in 0..500 {
        match plucker_case(&mut s, i) {
            Ok(None) => {}
            Ok(Some(f)) => failures.push(f),
            Err(e) => failures.push(e.to_string()),
        }
    }
    for i in 0..100 {
        let w = non_decomposable(&mut s, i);
        match plucker::is_decomposable(&w) {
            Ok(false) => {}
            Ok(true) => failures.push(format!("{w} judged decomposable")),
            Err(e) => failures.push(e.to_string()),
        }
    }
    let elapsed = start.elapsed();
    budget(&mut failures, elapsed, Duration::from_secs(30));
    outcome(&failures, format!("500 decomposable + containment cases, 100 non-decomposable, {elapsed:.2?}"))
}

// 3. containment constructions

fn check_witness(omega: &MultiVector, eta: &MultiVector, up: bool, positive: bool) -> Result<Option<String>> {
    let grade = if up { omega.grade() + 1 } else { omega.grade() - 1 };
    if eta.is_zero() || eta.grade() != grade {
        return Ok(Some(format!("bad output {eta} for {omega}")));
    }
    if !plucker::is_decomposable(eta)? {
        return Ok(Some(format!("{eta} is not decomposable")));
    }
    let inside = if up { plucker::contains(omega, eta)? } else { plucker::contains(eta, omega)? };
    if !inside {
        return Ok(Some(format!("containment fails between {omega} and {eta}")));
    }
    let sign = eta.classify_sign();
    let ok = if positive { sign == SignClass::Positive } else { sign.is_nonnegative() };
    if !ok {
        return Ok(Some(format!("{eta} has sign class {sign}")));
    }
    Ok(None)
}

fn lemma_case(lemmas: &Lemmas, omega: &MultiVector, positive: bool, worst_eps: &mut usize) -> Result<Option<String>> {
    let (down, up) = if positive {
        (lemmas.shrink_positive(omega)?, lemmas.extend_positive(omega)?)
    } else {
        (lemmas.shrink_nonneg(omega)?, lemmas.extend_nonneg(omega)?)
    };
    *worst_eps = (*worst_eps).max(down.max_iterations).max(up.max_iterations);
    for (w, is_up) in [(&down.eta, false), (&up.eta, true)] {
        if let Some(f) = check_witness(omega, w, is_up, positive)? {
            return Ok(Some(f));
        }
    }
    for (chain, is_up) in [(shrink_chain(omega, lemmas, positive)?, false), (extend_chain(omega, lemmas, positive)?, true)] {
        let mut prev = omega.clone();
        for w in &chain {
            if let Some(f) = check_witness(&prev, w, is_up, positive)? {
                return Ok(Some(format!("chain step: {f}")));
            }
            prev = w.clone();
        }
        let end = if is_up { omega.n() - 1 } else { 1 };
        if prev.grade() != end {
            return Ok(Some(format!("chain from {omega} stops at grade {}", prev.grade())));
        }
    }
    Ok(None)
}

fn criterion_lemmas() -> Outcome {
    let start = Instant::now();
    let lemmas = Lemmas::default();
    let mut s = Sampler::new(0xE3);
    let mut failures = Vec::new();
    let mut worst_eps = 0;
    for (k, n) in [(2, 4), (2, 5), (3, 5)] {
        for i in 0..1000 {
            let positive = i % 2 == 1;
            let p = if positive { s.positive_point(k, n) } else { s.boundary_point(k, n) };
            let res = p.and_then(|p| lemma_case(&lemmas, p.rho(), positive, &mut worst_eps));
            match res {
                Ok(None) => {}
                Ok(Some(f)) => failures.push(format!("G({k},{n}): {f}")),
                Err(e) => failures.push(format!("G({k},{n}): {e}")),
            }
        }
    }
    if worst_eps > 20 {
        failures.push(format!("epsilon search took {worst_eps} iterations"));
    }
    let elapsed = start.elapsed();
    budget(&mut failures, elapsed, Duration::from_secs(60));
    outcome(
        &failures,
        format!("500 nonnegative + 500 positive per G(2,4), G(2,5), G(3,5), max epsilon iterations {worst_eps}, {elapsed:.2?}"),
    )
}

// 4. chamber split / assemble

fn random_triple(s: &mut Sampler, k: usize, n: usize) -> Result<SplitTriple> {
    let omega = s.positive_point(k, n - 1)?.into_inner();
    let fiber = LinearFiber::over_omega(&omega)?;
    let eta = convex_point(s, &fiber)?;
    let t = match s.rng().gen_range(0..10) {
        0 => Rational::zero(),
        1 => Rational::one(),
        _ => {
            let q = s.rng().gen_range(2..=12);
            frac(s.rng().gen_range(1..q), q)
        }
    };
    Ok(SplitTriple {
        eta: (!t.is_zero()).then(|| eta.lift_first()),
        omega: (!t.is_one()).then(|| omega.lift_first()),
        t,
    })
}

/// A random convex combination of the fiber's vertices.
fn convex_point(s: &mut Sampler, fiber: &LinearFiber) -> Result<MultiVector> {
    let verts = fiber.vertices();
    let weights: Vec<Rational> = verts.iter().map(|_| int(s.rng().gen_range(0..=4))).collect();
    let total: Rational = weights.iter().fold(Rational::zero(), |a, b| a + b);
    let (weights, total) = if total.is_zero() { (vec![Rational::one(); verts.len()], int(verts.len() as i64)) } else { (weights, total) };
    let u: Vec<Rational> = (0..fiber.dim())
        .map(|d| verts.iter().zip(&weights).fold(Rational::zero(), |acc, (v, w)| acc + &v[d] * w) / &total)
        .collect();
    fiber.point(&u)
}

fn worked_example() -> Result<bool> {
    let vals: Vec<Rational> = [1, 2, 3, 1, 2, 1].iter().map(|&x| frac(x, 10)).collect();
    let p = ChamberPoint::new(MultiVector::from_dense(4, 2, &vals)?)?;
    let s = split(&p)?;
    let eta = MultiVector::from_dense(4, 1, &[int(0), frac(1, 6), frac(1, 3), frac(1, 2)])?;
    let omega = MultiVector::from_pairs(4, 2, &[(&[2, 3], frac(1, 4)), (&[2, 4], frac(1, 2)), (&[3, 4], frac(1, 4))])?;
    Ok(s.t == frac(3, 5) && s.eta.as_ref() == Some(&eta) && s.omega.as_ref() == Some(&omega) && assemble(&s)? == p)
}

fn criterion_chamber() -> Outcome {
    let start = Instant::now();
    let mut s = Sampler::new(0xE4);
    let mut failures = Vec::new();
    for (k, n) in [(2, 4), (2, 5), (3, 5)] {
        for _ in 0..1000 {
            let res = (|| -> Result<Option<String>> {
                let p = s.nonneg_point(k, n)?;
                if assemble(&split(&p)?)? != p {
                    return Ok(Some(format!("assemble(split(ρ)) != ρ for {}", p.rho())));
                }
                let triple = random_triple(&mut s, k, n)?;
                if split(&assemble(&triple)?)? != triple {
                    return Ok(Some(format!("split(assemble(s)) != s at t = {}", triple.t)));
                }
                Ok(None)
            })();
            match res {
                Ok(None) => {}
                Ok(Some(f)) => failures.push(format!("G({k},{n}): {f}")),
                Err(e) => failures.push(format!("G({k},{n}): {e}")),
            }
        }
    }
    match worked_example() {
        Ok(true) => {}
        Ok(false) => failures.push("worked example does not reproduce t = 3/5, η, ω".into()),
        Err(e) => failures.push(format!("worked example: {e}")),
    }
    outcome(&failures, format!("1000 points and 1000 triples per G(2,4), G(2,5), G(3,5), worked example, {:.2?}", start.elapsed()))
}

// 5. convexoid map on the square

fn square() -> Convexoid<ConstantFiber> {
    let fiber = HPolytope::cuboid(&[-1.0], &[1.0]);
    Convexoid::new(ConstantFiber { base_dim: 1, fiber }, ConvexoidConfig::default()).unwrap()
}

fn criterion_square() -> Outcome {
    let start = Instant::now();
    let c = square();
    let mut s = Sampler::new(0xE5);
    let mut failures = Vec::new();
    let mut check = |ok: bool, msg: String| {
        if !ok {
            failures.push(msg);
        }
    };

    let r = 0.5f64.sqrt();
    match c.to_half_ball(&[1.0], &[1.0]) {
        Ok(z) => check(max_abs_diff(&z, &[r, r]) <= 1e-9, format!("corner maps to {z:?}")),
        Err(e) => check(false, format!("corner: {e}")),
    }

    let mut bottom_worst = 0.0f64;
    for i in 0..=200 {
        let y = -1.0 + 2.0 * i as f64 / 200.0;
        match c.to_half_ball(&[0.0], &[y]) {
            Ok(z) => {
                bottom_worst = bottom_worst.max(z[0].abs());
                check(z[0].abs() <= 1e-9 && z[1].abs() <= 1.0 + 1e-9, format!("bottom point {y} maps to {z:?}"));
            }
            Err(e) => check(false, format!("bottom point {y}: {e}")),
        }
    }
    for (y, end) in [(-1.0, -1.0), (1.0, 1.0)] {
        match c.to_half_ball(&[0.0], &[y]) {
            Ok(z) => check(max_abs_diff(&z, &[0.0, end]) <= 1e-9, format!("bottom end {y} maps to {z:?}")),
            Err(e) => check(false, e.to_string()),
        }
    }

    let mut round_worst = 0.0f64;
    for _ in 0..200 {
        let p = [s.rng().gen_range(0.0..1.0)];
        let y = [s.rng().gen_range(-1.0..1.0)];
        match c.to_half_ball(&p, &y).and_then(|z| c.from_half_ball(&z)) {
            Ok((p2, y2)) => round_worst = round_worst.max(max_abs_diff(&p, &p2)).max(max_abs_diff(&y, &y2)),
            Err(e) => check(false, format!("round trip at {p:?},{y:?}: {e}")),
        }
    }
    check(round_worst <= 1e-6, format!("round trip error {round_worst:e}"));

    let mut reentries = 0usize;
    for _ in 0..10_000 {
        let v = [s.rng().gen_range(0.0..1.0), s.rng().gen_range(-1.0..1.0)];
        let v = nngr_core::polytope::scale(&v, 1.0 / norm(&v));
        match c.exit_time(&v) {
            Ok(et) => {
                let inside = (1..20).all(|i| c.ray_membership(&v, et.t * i as f64 / 20.0).unwrap_or(false));
                let outside = (1..20).all(|i| !c.ray_membership(&v, et.t * (1.0 + 1e-6 + i as f64 / 10.0)).unwrap_or(true));
                if !(inside && outside) {
                    reentries += 1;
                }
            }
            Err(_) => reentries += 1,
        }
    }
    check(reentries == 0, format!("{reentries} rays left and re-entered the body"));

    outcome(
        &failures,
        format!(
            "corner, bottom (worst |first coordinate| {bottom_worst:e}), round trip {round_worst:e} on 200 points, 10^4 rays, {:.2?}",
            start.elapsed()
        ),
    )
}

// 6. ball charts

struct ChartStats {
    failures: Vec<String>,
    boundary_total: usize,
    boundary_near: usize,
    min_boundary_norm: f64,
    worst_round_trip: f64,
    min_margin: f64,
}

fn sweep_chart(k: usize, n: usize, samples: usize, s: &mut Sampler) -> ChartStats {
    let mut st = ChartStats {
        failures: Vec::new(),
        boundary_total: 0,
        boundary_near: 0,
        min_boundary_norm: f64::INFINITY,
        worst_round_trip: 0.0,
        min_margin: f64::INFINITY,
    };
    let chart = match BallChart::new(k, n, &ChartConfig::default()) {
        Ok(c) => c,
        Err(e) => {
            st.failures.push(e.to_string());
            return st;
        }
    };
    let mut points: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
    for i in 0..samples {
        let positive = i % 2 == 0;
        let p = if positive { s.positive_point(k, n) } else { s.boundary_point(k, n) };
        let res = p.and_then(|p| {
            let c = chart.chart(&p)?;
            let back = chart.inverse(&c)?;
            Ok((p, c, back))
        });
        let (p, c, back) = match res {
            Ok(x) => x,
            Err(e) => {
                st.failures.push(format!("G({k},{n}): {e}"));
                continue;
            }
        };
        let r = norm(&c.coords);
        if c.coords.len() != k * (n - k) {
            st.failures.push(format!("G({k},{n}): chart has {} coordinates", c.coords.len()));
        }
        if r > 1.0 + 1e-9 {
            st.failures.push(format!("G({k},{n}): norm {r} for {}", p.rho()));
        }
        if positive && r >= 1.0 {
            st.failures.push(format!("G({k},{n}): positive point at norm {r}"));
        }
        if !positive {
            st.boundary_total += 1;
            st.min_boundary_norm = st.min_boundary_norm.min(r);
            if r >= 1.0 - 1e-4 {
                st.boundary_near += 1;
            }
        }
        let input = p.rho().to_dense_f64();
        let err = max_abs_diff(&input, &back.rho().to_dense_f64());
        st.worst_round_trip = st.worst_round_trip.max(err);
        if err >= 1e-6 {
            st.failures.push(format!("G({k},{n}): round trip error {err:e} for {}", p.rho()));
        }
        points.push((input, c.coords));
    }
    let mut pairs = 0;
    while pairs < 10_000 && points.len() > 1 {
        let i = s.rng().gen_range(0..points.len());
        let j = s.rng().gen_range(0..points.len());
        if max_abs_diff(&points[i].0, &points[j].0) < 1e-8 {
            if i != j && points.iter().all(|q| q.0 == points[i].0) {
                break;
            }
            continue;
        }
        pairs += 1;
        st.min_margin = st.min_margin.min(norm(&sub(&points[i].1, &points[j].1)));
    }
    if st.min_margin <= 0.0 {
        st.failures.push(format!("G({k},{n}): two distinct inputs share a chart point"));
    }
    st
}

fn criterion_charts() -> Outcome {
    let start = Instant::now();
    let mut s = Sampler::new(0xE6);
    let mut failures = Vec::new();
    let mut notes = Vec::new();
    for (k, n) in [(1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (2, 4)] {
        let st = sweep_chart(k, n, 500, &mut s);
        failures.extend(st.failures);
        notes.push(format!(
            "G({k},{n}) round trip {:.1e}, margin {:.1e}, boundary near sphere {}/{} (min norm {:.6})",
            st.worst_round_trip, st.min_margin, st.boundary_near, st.boundary_total, st.min_boundary_norm
        ));
    }
    let elapsed = start.elapsed();
    budget(&mut failures, elapsed, Duration::from_secs(300));
    outcome(&failures, format!("500 samples each, {elapsed:.2?}; {}", notes.join("; ")))
}

// 7. gluing

struct Identity;

impl BottomIdentification for Identity {
    fn e_to_f(&self, x: &[f64], y: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        Ok((x.to_vec(), y.to_vec()))
    }
    fn f_to_e(&self, x: &[f64], y: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        Ok((x.to_vec(), y.to_vec()))
    }
}

fn criterion_gluing() -> Outcome {
    let start = Instant::now();
    let mut s = Sampler::new(0xE7);
    let mut failures = Vec::new();

    let disks = Gluing::new(square(), square(), Identity).unwrap();
    let mut disk_worst = 0.0f64;
    for _ in 0..200 {
        let y = [s.rng().gen_range(-1.0..=1.0)];
        match (disks.to_ball(Side::E, &[0.0], &y), disks.to_ball(Side::F, &[0.0], &y)) {
            (Ok(a), Ok(b)) => disk_worst = disk_worst.max(norm(&sub(&a, &b))),
            (Err(e), _) | (_, Err(e)) => failures.push(format!("half-disks: {e}")),
        }
    }
    if disk_worst > 1e-6 {
        failures.push(format!("half-disk bottoms differ by {disk_worst:e}"));
    }

    let chart = BallChart::new(2, 4, &ChartConfig::default()).unwrap();
    let mut chart_worst = 0.0f64;
    for _ in 0..200 {
        let res = (|| -> Result<f64> {
            let omega = if s.rng().gen_bool(0.5) { s.positive_point(2, 3)? } else { s.boundary_point(2, 3)? }.into_inner();
            let eta = convex_point(&mut s, &LinearFiber::over_omega(&omega)?)?;
            let p = assemble(&SplitTriple { t: frac(1, 2), eta: Some(eta.lift_first()), omega: Some(omega.lift_first()) })?;
            let a = chart.chart_from_side(&p, Side::E)?.coords;
            let b = chart.chart_from_side(&p, Side::F)?.coords;
            Ok(norm(&sub(&a, &b)))
        })();
        match res {
            Ok(d) => chart_worst = chart_worst.max(d),
            Err(e) => failures.push(format!("G(2,4) bottom: {e}")),
        }
    }
    if chart_worst > 1e-6 {
        failures.push(format!("G(2,4) bottoms differ by {chart_worst:e}"));
    }
    outcome(
        &failures,
        format!(
            "200 bottom samples each: half-disks {disk_worst:.1e}, G(2,4) slice t = 1/2 {chart_worst:.1e}, {:.2?}",
            start.elapsed()
        ),
    )
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 7] = [
        ("exterior algebra suite", criterion_exterior),
        ("Plücker suite", criterion_plucker),
        ("containment constructions", criterion_lemmas),
        ("chamber split/assemble", criterion_chamber),
        ("convexoid map on the square", criterion_square),
        ("ball charts G(1,n), G(2,4)", criterion_charts),
        ("gluing consistency", criterion_gluing),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        all &= o.pass;
        println!("criterion {} [{}] {}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, name, o.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

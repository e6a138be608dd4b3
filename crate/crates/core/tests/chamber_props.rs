use num_traits::Signed;
use proptest::prelude::*;
use rand::Rng;

use nngr_core::chamber::LinearFiber;
use nngr_core::plucker::{plucker_of_matrix, PlaneMatrix};
use nngr_core::rational::{frac, to_f64, Rational};
use nngr_core::{assemble, split, ChamberPoint, MultiVector, Sampler, SplitTriple};

fn config() -> ProptestConfig {
    ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() }
}

fn shape() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=6).prop_flat_map(|n| (1..n, Just(n)))
}

fn l1(a: &MultiVector, b: &MultiVector) -> Rational {
    (a - b).terms().fold(frac(0, 1), |acc, (_, c)| acc + c.abs())
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn split_and_assemble_are_inverse((k, n) in shape(), seed in any::<u64>()) {
        let p = Sampler::new(seed).nonneg_point(k, n).unwrap();
        let s = split(&p).unwrap();
        s.validate().unwrap();
        prop_assert_eq!(assemble(&s).unwrap(), p);
    }

    #[test]
    fn t_is_one_lipschitz((k, n) in shape(), seed in any::<u64>()) {
        // t = Σ_{A ∋ 1} ρ_A, so |Δt| ≤ ‖Δρ‖₁
        let mut s = Sampler::new(seed);
        let m = s.positive_matrix(k, n).unwrap();
        let factors = random_factors(&mut s, n);
        let a = ChamberPoint::new(plucker_of_matrix(&m).normalize().unwrap()).unwrap();
        for step in 1..=6 {
            let q = ChamberPoint::new(perturbed(&m, &factors, &frac(1, 10i64.pow(step)))).unwrap();
            let dt = (split(&a).unwrap().t - split(&q).unwrap().t).abs();
            prop_assert!(dt <= l1(a.rho(), q.rho()));
        }
    }

    #[test]
    fn split_triple_json_round_trip((k, n) in shape(), seed in any::<u64>()) {
        let s = split(&Sampler::new(seed).nonneg_point(k, n).unwrap()).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        let back: SplitTriple = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, s);
    }
}

/// Elementary factors `I + δ·E_{i,i±1}`, as (source, target) column pairs.
fn random_factors(s: &mut Sampler, n: usize) -> Vec<(usize, usize)> {
    (0..3)
        .map(|_| {
            let i = s.rng().gen_range(0..n - 1);
            if s.rng().gen_bool(0.5) { (i, i + 1) } else { (i + 1, i) }
        })
        .collect()
}

/// Normalized minors of `m` times the factors at step `delta`. Totally nonnegative factors keep
/// a positive point positive.
fn perturbed(m: &PlaneMatrix, factors: &[(usize, usize)], delta: &Rational) -> MultiVector {
    let mut rows = m.rows().to_vec();
    for &(src, dst) in factors {
        for r in rows.iter_mut() {
            let add = &r[src] * delta;
            r[dst] += add;
        }
    }
    plucker_of_matrix(&PlaneMatrix::new(m.n(), rows).unwrap()).normalize().unwrap()
}

fn vertex_cloud(f: &LinearFiber) -> Vec<Vec<f64>> {
    f.vertices().iter().map(|u| f.point(u).unwrap().to_dense_f64()).collect()
}

fn hausdorff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let d = |x: &Vec<f64>, y: &Vec<f64>| x.iter().zip(y).map(|(p, q)| (p - q) * (p - q)).sum::<f64>().sqrt();
    let one_way = |a: &[Vec<f64>], b: &[Vec<f64>]| {
        a.iter().map(|x| b.iter().map(|y| d(x, y)).fold(f64::INFINITY, f64::min)).fold(0.0f64, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

#[test]
fn fibers_vary_continuously_with_the_base() {
    let mut s = Sampler::new(21);
    for (k, n) in [(2, 3), (2, 4), (1, 4), (3, 4)] {
        for _ in 0..10 {
            let m = s.positive_matrix(k, n).unwrap();
            let factors = random_factors(&mut s, n);
            let base = plucker_of_matrix(&m).normalize().unwrap();
            let cloud = |w: &MultiVector| {
                let e = vertex_cloud(&LinearFiber::over_omega(w).unwrap());
                let f = vertex_cloud(&LinearFiber::over_eta(w).unwrap());
                (e, f)
            };
            let (e0, f0) = cloud(&base);
            let mut last = f64::INFINITY;
            for step in 2..=7 {
                let delta = frac(1, 10i64.pow(step));
                let w = perturbed(&m, &factors, &delta);
                let (e, f) = cloud(&w);
                let dist = hausdorff(&e0, &e).max(hausdorff(&f0, &f));
                // the distance shrinks with the perturbation, roughly linearly
                assert!(dist <= 1e3 * to_f64(&delta), "G({k},{n}) at δ = {delta}: {dist}");
                assert!(dist <= last * 1.01 + 1e-15);
                last = dist;
            }
        }
    }
}

#[test]
fn fiber_interior_points_are_interior() {
    let mut s = Sampler::new(22);
    for (k, n) in [(2, 4), (2, 5), (3, 5)] {
        for _ in 0..20 {
            let w = s.positive_point(k, n).unwrap().into_inner();
            for f in [LinearFiber::over_omega(&w).unwrap(), LinearFiber::over_eta(&w).unwrap()] {
                let mean = f.vertex_mean();
                assert!(f.contains(&mean));
                let x = f.point(&mean).unwrap();
                assert!(x.is_normalized());
                assert!(x.classify_sign().is_nonnegative());
            }
        }
    }
}

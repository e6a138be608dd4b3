use proptest::prelude::*;

use nngr_core::exterior::SignClass;
use nngr_core::lemmas::{extend_chain, shrink_chain, EpsilonSearch, Lemmas};
use nngr_core::plucker;
use nngr_core::rational::frac;
use nngr_core::{Error, Sampler};

fn config() -> ProptestConfig {
    ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() }
}

/// (k, n) with 1 ≤ k < n ≤ 6.
fn shape() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=6).prop_flat_map(|n| (1..n, Just(n)))
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn positive_chains_stay_positive((k, n) in shape(), seed in any::<u64>()) {
        let lemmas = Lemmas::default();
        let w = Sampler::new(seed).positive_point(k, n).unwrap().into_inner();
        let mut prev = w.clone();
        for eta in shrink_chain(&w, &lemmas, true).unwrap() {
            prop_assert_eq!(eta.classify_sign(), SignClass::Positive);
            prop_assert!(plucker::contains(&eta, &prev).unwrap());
            prev = eta;
        }
        prop_assert_eq!(prev.grade(), 1);
        let mut prev = w.clone();
        for eta in extend_chain(&w, &lemmas, true).unwrap() {
            prop_assert_eq!(eta.classify_sign(), SignClass::Positive);
            prop_assert!(plucker::contains(&prev, &eta).unwrap());
            prev = eta;
        }
        prop_assert_eq!(prev.grade(), (n - 1).max(k));
    }

    #[test]
    fn nonnegative_chains_stay_nonnegative((k, n) in shape(), seed in any::<u64>()) {
        let lemmas = Lemmas::default();
        let w = Sampler::new(seed).boundary_point(k, n).unwrap().into_inner();
        for eta in shrink_chain(&w, &lemmas, false).unwrap().into_iter().chain(extend_chain(&w, &lemmas, false).unwrap()) {
            prop_assert!(eta.classify_sign().is_nonnegative());
            prop_assert!(eta.is_normalized());
            prop_assert!(plucker::is_decomposable(&eta).unwrap());
        }
    }

    #[test]
    fn extension_is_a_wedge_with_a_basis_vector((k, n) in shape(), seed in any::<u64>()) {
        let w = Sampler::new(seed).nonneg_point(k, n).unwrap().into_inner();
        let eta = Lemmas::default().extend_nonneg(&w).unwrap().eta;
        prop_assert_eq!(eta.grade(), k + 1);
        // e_j ∧ ω vanishes on every index set without j
        let wedged = (1..=n).find(|&j| eta.support().all(|a| a.contains(j)) && w.support().any(|a| !a.contains(j)));
        prop_assert!(wedged.is_some());
    }

    #[test]
    fn epsilon_is_the_first_working_candidate(n in 3usize..=6, seed in any::<u64>()) {
        // grade 2 runs a single search, so the schedule is observable from outside
        let w = Sampler::new(seed).positive_point(2, n).unwrap().into_inner();
        let lemmas = Lemmas::default();
        let first = lemmas.shrink_positive(&w).unwrap();
        prop_assert_eq!(&first, &lemmas.shrink_positive(&w).unwrap());
        let eps = first.epsilon.clone().unwrap();
        let cfg = &lemmas.epsilon;
        let mut expected = cfg.initial.clone();
        for _ in 1..first.max_iterations {
            expected *= &cfg.shrink_factor;
        }
        prop_assert_eq!(&eps, &expected);
        // restarting at the returned value succeeds at once
        let restart = Lemmas::new(EpsilonSearch { initial: eps.clone(), ..cfg.clone() }, true).unwrap();
        let again = restart.shrink_positive(&w).unwrap();
        prop_assert_eq!(again.eta, first.eta);
        prop_assert_eq!(again.max_iterations, 1);
        // the candidate just before it fails
        if first.max_iterations > 1 {
            let previous = &eps / &cfg.shrink_factor;
            let one_shot = Lemmas::new(EpsilonSearch { initial: previous, max_iterations: 1, ..cfg.clone() }, true).unwrap();
            prop_assert_eq!(one_shot.shrink_positive(&w), Err(Error::EpsilonExhausted(1)));
        }
    }
}

#[test]
fn custom_schedule_is_respected() {
    let w = Sampler::new(3).positive_point(3, 6).unwrap().into_inner();
    let cfg = EpsilonSearch { initial: frac(1, 3), shrink_factor: frac(1, 4), max_iterations: 20 };
    let lemmas = Lemmas::new(cfg, true).unwrap();
    let out = lemmas.shrink_positive(&w).unwrap();
    assert_eq!(out.eta.classify_sign(), SignClass::Positive);
    assert!(out.max_iterations <= 20);
    let up = lemmas.extend_positive(&w).unwrap();
    assert_eq!(up.eta.classify_sign(), SignClass::Positive);
}

//! Randomized invariants of the functional algebra and the exact classical bounds.

use bellcomm::classical::{
    bidirectional_onebit_bound, bipartition_lemma_check, cbit_bound, local_bound, onebit_bound,
    onebit_bruteforce_oracle, BoundResult, Budget,
};
use bellcomm::model::{BellFunctional, Copy, Direction, Distribution, Scenario, DISTRIBUTION_TOL};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;
use common::{
    certificate_value, fully_informed_value, random_functional, random_local_distribution, random_scenario,
    random_strategy,
};

/// The attached witness must reproduce the reported value exactly.
fn assert_certified(f: &BellFunctional, r: &BoundResult) {
    assert_eq!(certificate_value(f, r), Some(r.value), "certificate of {}", r.method);
}

#[test]
fn bound_chain_on_random_games() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..200 {
        let s = random_scenario(&mut rng);
        let f = random_functional(&mut rng, s, 0, 3);
        let budget = Budget::unlimited();
        let l = local_bound(&f, budget).unwrap();
        let one = onebit_bound(&f, Direction::AliceToBob, budget).unwrap();
        let c1 = cbit_bound(&f, 1, Direction::AliceToBob, budget).unwrap();
        let c2 = cbit_bound(&f, 2, Direction::AliceToBob, budget).unwrap();
        let c3 = cbit_bound(&f, 3, Direction::AliceToBob, budget).unwrap();
        let bi = bidirectional_onebit_bound(&f, budget).unwrap();
        for r in [&l, &one, &c1, &c2, &c3, &bi] {
            assert!(r.is_exact());
            assert_certified(&f, r);
        }
        let alg = f.algebraic_bound();
        assert_eq!(c1.value, one.value, "case {case}: c=1 differs from one-bit");
        assert!(l.value <= one.value && one.value <= bi.value, "case {case}");
        assert!(bi.value <= 2 * l.value, "case {case}: one-bit exceeds twice local");
        assert!(one.value <= c2.value && c2.value <= c3.value && c3.value <= alg, "case {case}");
        // With at least as many messages as sender inputs, Bob learns x.
        let informed = fully_informed_value(&f);
        assert_eq!(c3.value, informed, "case {case}");
    }
}

#[test]
fn partition_formula_matches_protocol_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let shapes = [Scenario::new(2, 2, 2, 2).unwrap(), Scenario::new(3, 2, 2, 2).unwrap()];
    for case in 0..500 {
        let f = random_functional(&mut rng, shapes[case % 2], 0, 5);
        let exact = onebit_bound(&f, Direction::AliceToBob, Budget::unlimited()).unwrap();
        assert_eq!(exact.value, onebit_bruteforce_oracle(&f).unwrap(), "case {case}");
        assert_certified(&f, &exact);
    }
}

#[test]
fn bipartition_lemma_small_m() {
    assert!(bipartition_lemma_check(2));
    assert!(bipartition_lemma_check(3));
}

#[test]
fn local_distributions_never_beat_the_local_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..50 {
        let s = random_scenario(&mut rng);
        let f = random_functional(&mut rng, s, 0, 3);
        let l = local_bound(&f, Budget::unlimited()).unwrap().as_f64();
        let dist = random_local_distribution(&mut rng, s);
        dist.check_normalization(DISTRIBUTION_TOL).unwrap();
        dist.check_no_signalling(DISTRIBUTION_TOL).unwrap();
        assert!(f.evaluate(&dist).unwrap() <= l + 1e-9);
    }
}

fn small_scenario() -> impl Strategy<Value = Scenario> {
    (1usize..=3, 1usize..=3, 2usize..=3, 2usize..=3).prop_map(|(ma, mb, oa, ob)| Scenario::new(ma, mb, oa, ob).unwrap())
}

fn functional_on(s: Scenario) -> impl Strategy<Value = BellFunctional> {
    prop::collection::vec(0i64..=3, s.dense_len().unwrap())
        .prop_map(move |c| BellFunctional::from_dense(s, c, 1).unwrap())
}

fn any_functional() -> impl Strategy<Value = BellFunctional> {
    small_scenario().prop_flat_map(functional_on)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tensor_coefficients_multiply(f in any_functional(), g in any_functional()) {
        let h = f.tensor(&g);
        let (s, t) = (f.scenario(), g.scenario());
        prop_assert_eq!(h.scenario(), s.tensor(&t));
        for x in 0..h.scenario().inputs_a {
            for y in 0..h.scenario().inputs_b {
                for a in 0..h.scenario().outputs_a {
                    for b in 0..h.scenario().outputs_b {
                        let (x1, x2, y1, y2) = (x / t.inputs_a, x % t.inputs_a, y / t.inputs_b, y % t.inputs_b);
                        let (a1, a2, b1, b2) = (a / t.outputs_a, a % t.outputs_a, b / t.outputs_b, b % t.outputs_b);
                        prop_assert_eq!(h.coefficient(a, b, x, y), f.coefficient(a1, b1, x1, y1) * g.coefficient(a2, b2, x2, y2));
                    }
                }
            }
        }
    }

    #[test]
    fn algebraic_bound_is_multiplicative_for_games(
        f in small_scenario().prop_flat_map(|s| prop::collection::vec(0i64..=3, s.dense_len().unwrap())
            .prop_map(move |c| BellFunctional::from_dense(s, c, 1).unwrap())),
        n in 1usize..=2,
    ) {
        let power = f.tensor_power(n + 1).unwrap();
        prop_assert_eq!(power.algebraic_bound(), f.algebraic_bound().pow(n as u32 + 1));
    }

    #[test]
    fn evaluation_is_affine_in_mixtures(f in any_functional(), seed in any::<u64>(), w in 0.0f64..=1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_local_distribution(&mut rng, f.scenario());
        let q = random_local_distribution(&mut rng, f.scenario());
        let mixed = f.evaluate(&p.mix(&q, w).unwrap()).unwrap();
        let want = w * f.evaluate(&p).unwrap() + (1.0 - w) * f.evaluate(&q).unwrap();
        prop_assert!((mixed - want).abs() < 1e-9);
    }

    #[test]
    fn coarse_graining_recovers_each_copy(s in small_scenario(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_local_distribution(&mut rng, s);
        let q = random_local_distribution(&mut rng, s);
        let joint = p.tensor(&q).unwrap();
        joint.check_normalization(DISTRIBUTION_TOL).unwrap();
        joint.check_no_signalling(DISTRIBUTION_TOL).unwrap();
        let (x, y) = (rng.gen_range(0..s.inputs_a), rng.gen_range(0..s.inputs_b));
        let first = joint.coarse_grain(s, Copy::First, x, y).unwrap();
        let second = joint.coarse_grain(s, Copy::Second, x, y).unwrap();
        for (u, v) in first.as_slice().iter().zip(p.as_slice()) {
            prop_assert!((u - v).abs() < 1e-12);
        }
        for (u, v) in second.as_slice().iter().zip(q.as_slice()) {
            prop_assert!((u - v).abs() < 1e-12);
        }
    }

    #[test]
    fn product_evaluation_matches_joint_table(f in any_functional(), g in any_functional(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_local_distribution(&mut rng, f.scenario());
        let q = random_local_distribution(&mut rng, g.scenario());
        let h = f.tensor(&g);
        let joint = h.evaluate(&p.tensor(&q).unwrap()).unwrap();
        let fast = h.evaluate_product(&[p.clone(), q.clone()]).unwrap();
        prop_assert!((joint - fast).abs() < 1e-9);
        prop_assert!((joint - f.evaluate(&p).unwrap() * g.evaluate(&q).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn deterministic_tables_are_valid(s in small_scenario(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let strategy = random_strategy(&mut rng, s);
        let dist = Distribution::deterministic(s, &strategy).unwrap();
        prop_assert!(dist.check_normalization(DISTRIBUTION_TOL).is_ok());
        prop_assert!(dist.check_no_signalling(DISTRIBUTION_TOL).is_ok());
        prop_assert!(dist.as_slice().iter().all(|&p| p == 0.0 || p == 1.0));
    }
}

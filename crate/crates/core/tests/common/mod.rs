//! Random instances shared by the integration tests.

#![allow(dead_code)]

use bellcomm::classical::{BoundResult, Certificate};
use bellcomm::model::{BellFunctional, DeterministicStrategy, Distribution, Scenario};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_functional(rng: &mut ChaCha8Rng, s: Scenario, lo: i64, hi: i64) -> BellFunctional {
    let len = s.dense_len().unwrap();
    let coefficients = (0..len).map(|_| rng.gen_range(lo..=hi)).collect();
    BellFunctional::from_dense(s, coefficients, 1).unwrap()
}

pub fn random_scenario(rng: &mut ChaCha8Rng) -> Scenario {
    Scenario::new(rng.gen_range(2..=4), rng.gen_range(2..=4), rng.gen_range(2..=3), rng.gen_range(2..=3)).unwrap()
}

pub fn random_strategy(rng: &mut ChaCha8Rng, s: Scenario) -> DeterministicStrategy {
    DeterministicStrategy::new(
        (0..s.inputs_a).map(|_| rng.gen_range(0..s.outputs_a)).collect(),
        (0..s.inputs_b).map(|_| rng.gen_range(0..s.outputs_b)).collect(),
    )
}

/// Mixture of random deterministic points: always a valid local distribution.
pub fn random_local_distribution(rng: &mut ChaCha8Rng, s: Scenario) -> Distribution {
    let mut dist = Distribution::deterministic(s, &random_strategy(rng, s)).unwrap();
    for k in 2..5 {
        let next = Distribution::deterministic(s, &random_strategy(rng, s)).unwrap();
        dist = next.mix(&dist, 1.0 / k as f64).unwrap();
    }
    dist
}

/// Value of the attached witness, or `None` when it cannot be re-evaluated on `f`.
pub fn certificate_value(f: &BellFunctional, r: &BoundResult) -> Option<i64> {
    match &r.certificate {
        Certificate::Strategy(s) => f.evaluate_strategy(s).ok(),
        Certificate::Protocol(p) => p.evaluate(f).ok(),
        _ => None,
    }
}

/// Sum over sender inputs of the best row when the responder learns the input.
pub fn fully_informed_value(f: &BellFunctional) -> i64 {
    let s = f.scenario();
    (0..s.inputs_a)
        .map(|x| {
            (0..s.outputs_a)
                .map(|a| {
                    (0..s.inputs_b)
                        .map(|y| (0..s.outputs_b).map(|b| f.coefficient(a, b, x, y)).max().unwrap())
                        .sum::<i64>()
                })
                .max()
                .unwrap()
        })
        .sum()
}

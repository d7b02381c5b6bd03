//! Independent code paths for quantum values must agree.

use bellcomm::catalog;
use bellcomm::model::{cglmp, magic, DISTRIBUTION_TOL};
use bellcomm::platonic::e7_vectors;
use bellcomm::quantum::{
    bell_operator, best_state, cglmp_measurements, cglmp_optimize_state, cglmp_quadratic_form, cglmp_strategy,
    chsh_quantum, correlators, magic_quantum, strategy_distribution, tsirelson_measurements, CglmpPhases, QuantumState,
    QuantumStrategy,
};
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_schmidt(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..d).map(|_| rng.gen_range(0.0..1.0)).collect();
    let norm = raw.iter().map(|c| c * c).sum::<f64>().sqrt();
    raw.iter().map(|c| c / norm).collect()
}

#[test]
fn quadratic_form_matches_born_rule() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let phases = CglmpPhases::default();
    for case in 0..50 {
        let d = 2 + case % 5;
        let c = random_schmidt(&mut rng, d);
        let m = cglmp_quadratic_form(d, &phases).unwrap();
        let v = DVector::from_column_slice(&c);
        let form = (v.transpose() * &m * &v)[(0, 0)];
        let (alice, bob) = cglmp_measurements(d, &phases).unwrap();
        let qs = QuantumStrategy::new(QuantumState::Schmidt(c.clone()), alice, bob).unwrap();
        let f = cglmp(d).unwrap();
        let dist = strategy_distribution(f.scenario(), &qs).unwrap();
        dist.check_normalization(DISTRIBUTION_TOL).unwrap();
        dist.check_no_signalling(DISTRIBUTION_TOL).unwrap();
        let direct = f.evaluate(&dist).unwrap();
        assert!((form - direct).abs() < 1e-9, "d = {d}: {form} vs {direct}");
        assert!((cglmp_strategy(d, &c).unwrap().value() - direct).abs() < 1e-9);
    }
}

#[test]
fn best_state_dominates_supplied_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for d in 2..=5 {
        let (alice, bob) = cglmp_measurements(d, &CglmpPhases::default()).unwrap();
        let f = cglmp(d).unwrap();
        let op = bell_operator(&f, &alice, &bob).unwrap();
        assert!(op.hermiticity_error() < 1e-12);
        let (_, top) = best_state(&op);
        let (_, optimized) = cglmp_optimize_state(d).unwrap();
        assert!((top - optimized).abs() < 1e-9, "d = {d}");
        for _ in 0..5 {
            let c = random_schmidt(&mut rng, d);
            assert!(op.expectation(&QuantumState::Schmidt(c)).unwrap() <= top + 1e-9);
        }
    }
}

#[test]
fn library_strategies_are_valid_distributions() {
    let (chsh, _) = chsh_quantum().unwrap();
    let (magic_qs, _) = magic_quantum().unwrap();
    for qs in [chsh.tensor_power(2).unwrap(), magic_qs.clone()] {
        let dist = strategy_distribution(qs.scenario(), &qs).unwrap();
        dist.check_normalization(DISTRIBUTION_TOL).unwrap();
        dist.check_no_signalling(DISTRIBUTION_TOL).unwrap();
    }
    let two = magic_qs.tensor_power(2).unwrap();
    let f = magic().tensor_power(2).unwrap();
    let value = f.evaluate(&strategy_distribution(f.scenario(), &two).unwrap()).unwrap();
    assert!((value - 81.0).abs() < 1e-9);
}

#[test]
fn quantum_values_exceed_exact_one_bit_bounds() {
    let (magic_qs, _) = magic_quantum().unwrap();
    let two = magic_qs.tensor_power(2).unwrap();
    let cases = [
        ("magic2s", &catalog::MAGIC2S_KEEP[..], &catalog::MAGIC2S_KEEP[..], 49.0, 48.0),
        ("magic2a", &catalog::MAGIC2A_KEEP_X[..], &catalog::MAGIC2A_KEEP_Y[..], 21.0, 20.0),
    ];
    for (name, keep_x, keep_y, quantum, onebit) in cases {
        let f = catalog::build(name).unwrap();
        let qs = two.restrict(keep_x, keep_y).unwrap();
        let value = f.evaluate(&strategy_distribution(f.scenario(), &qs).unwrap()).unwrap();
        assert!((value - quantum).abs() < 1e-9, "{name}: {value}");
        assert!(value > onebit);
    }
}

#[test]
fn tsirelson_reproduces_gram_matrix() {
    let v = e7_vectors();
    let qs = tsirelson_measurements(&v).unwrap();
    let pf = catalog::plato_e7().to_probability().unwrap();
    let dist = strategy_distribution(pf.functional.scenario(), &qs).unwrap();
    dist.check_no_signalling(DISTRIBUTION_TOL).unwrap();
    let e = correlators(&dist).unwrap();
    let ratio = |r: num_rational::Ratio<i64>| *r.numer() as f64 / *r.denom() as f64;
    for x in 0..v.len() {
        for y in 0..v.len() {
            assert!((e[x * v.len() + y] - ratio(v.dot(x, y))).abs() < 1e-9);
        }
    }
    let value = pf.functional.evaluate(&dist).unwrap() - ratio(pf.offset);
    assert!((value - 567.0).abs() < 1e-6, "{value}");
}

//! See-saw searches: reproducible, monotone in restarts, and never above exact bounds.

use bellcomm::catalog;
use bellcomm::classical::{local_bound, onebit_bound, Budget, Certificate};
use bellcomm::heuristics::{seesaw_local, seesaw_onebit, SearchConfig};
use bellcomm::model::{BellFunctional, Direction};

fn certified_value(f: &BellFunctional, c: &Certificate) -> i64 {
    match c {
        Certificate::Strategy(s) => f.evaluate_strategy(s).unwrap(),
        Certificate::Protocol(p) => p.evaluate(f).unwrap(),
        other => panic!("unexpected certificate {other:?}"),
    }
}

#[test]
fn same_seed_same_outcome() {
    let f = catalog::build("chsh3").unwrap();
    let cfg = SearchConfig::new(7, 40);
    let a = seesaw_onebit(&f, &cfg).unwrap();
    let b = seesaw_onebit(&f, &cfg).unwrap();
    assert_eq!(a.result.value, b.result.value);
    assert_eq!(a.result.certificate, b.result.certificate);
    assert_eq!(a.histogram, b.histogram);
    assert_eq!(a.best_restart, b.best_restart);
}

#[test]
fn more_restarts_never_hurt() {
    let f = catalog::build("magic2s").unwrap();
    for seed in 0..3 {
        let mut last = i64::MIN;
        for restarts in [1, 4, 16, 64] {
            let out = seesaw_local(&f, &SearchConfig::new(seed, restarts)).unwrap();
            assert!(out.result.value >= last, "seed {seed}, {restarts} restarts");
            assert_eq!(out.histogram.values().sum::<u64>(), restarts as u64);
            last = out.result.value;
        }
    }
}

#[test]
fn results_are_certified_lower_bounds() {
    for name in ["chsh2", "magic", "cglmp3", "cglmp2x2s"] {
        let f = catalog::build(name).unwrap();
        let cfg = SearchConfig::new(3, 50);
        let local = seesaw_local(&f, &cfg).unwrap().result;
        let onebit = seesaw_onebit(&f, &cfg).unwrap().result;
        assert_eq!(certified_value(&f, &local.certificate), local.value, "{name}");
        assert_eq!(certified_value(&f, &onebit.certificate), onebit.value, "{name}");
        assert!(local.value <= local_bound(&f, Budget::unlimited()).unwrap().value);
        assert!(onebit.value <= onebit_bound(&f, Direction::AliceToBob, Budget::unlimited()).unwrap().value);
    }
}

#[test]
fn small_instances_reach_the_optimum() {
    let f = catalog::build("chsh2").unwrap();
    let cfg = SearchConfig::new(0, 200);
    assert_eq!(seesaw_local(&f, &cfg).unwrap().result.value, 10);
    assert_eq!(seesaw_onebit(&f, &cfg).unwrap().result.value, 12);
}

#[test]
fn zero_restarts_rejected() {
    let f = catalog::build("chsh").unwrap();
    assert!(seesaw_local(&f, &SearchConfig::new(0, 0)).is_err());
}

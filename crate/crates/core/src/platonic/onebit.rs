use std::collections::BTreeMap;
use std::time::Instant;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classical::{BoundKind, BoundResult, Certificate};
use crate::heuristics::SeesawOutcome;
use crate::model::lcm;
use crate::platonic::VectorConfiguration;

/// Upper bound `√2·L` on the one-bit value of a Platonic functional.
pub fn onebit_upper_sqrt2(local: f64) -> f64 {
    std::f64::consts::SQRT_2 * local
}

/// Exact test of `√2·L < t` for a rational local bound `L`, i.e. `2L² < t²`.
pub fn sqrt2_local_below(local: Ratio<i64>, t: i64) -> bool {
    let (n, d) = (i128::from(*local.numer()), i128::from(*local.denom()));
    let t = i128::from(t);
    2 * n * n < t * t * d * d
}

/// Stationary value of the two-direction expression
/// `√L · max_{u₁,u₂} Σ_i max(|u₁·V_i|, |u₂·V_i|)` found by alternating maximization.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TwoDirectionEstimate {
    pub value: f64,
    /// `upper` when the value does not exceed `√2·L`, otherwise `lower`: the
    /// maximization is non-concave, so a stationary value is never a proof by itself.
    pub kind: BoundKind,
    pub u1: Vec<f64>,
    pub u2: Vec<f64>,
    pub restarts: usize,
}

fn normalize(v: &mut [f64]) -> bool {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n < 1e-12 {
        return false;
    }
    v.iter_mut().for_each(|x| *x /= n);
    true
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn two_direction_objective(coords: &[Vec<f64>], u1: &[f64], u2: &[f64]) -> f64 {
    coords.iter().map(|v| dot(u1, v).abs().max(dot(u2, v).abs())).sum()
}

/// Alternating maximization: assign every vector to the direction it overlaps most
/// with (with its sign), then replace each direction by the normalized signed sum of
/// its vectors. Each half-step cannot decrease the objective.
pub fn two_direction_upper(v: &VectorConfiguration, local: f64, restarts: usize, seed: u64) -> TwoDirectionEstimate {
    let coords = v.orthonormal_coordinates();
    let n = v.dim();
    let runs: Vec<(f64, Vec<f64>, Vec<f64>)> = (0..restarts.max(1))
        .into_par_iter()
        .map(|restart| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(restart as u64);
            let mut random_unit = || loop {
                let mut u: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
                if normalize(&mut u) {
                    return u;
                }
            };
            let (mut u1, mut u2) = (random_unit(), random_unit());
            let mut value = two_direction_objective(&coords, &u1, &u2);
            for _ in 0..1000 {
                let mut s1 = vec![0.0; n];
                let mut s2 = vec![0.0; n];
                for c in &coords {
                    let (d1, d2) = (dot(&u1, c), dot(&u2, c));
                    let (target, d) = if d1.abs() >= d2.abs() { (&mut s1, d1) } else { (&mut s2, d2) };
                    let sign = if d >= 0.0 { 1.0 } else { -1.0 };
                    target.iter_mut().zip(c).for_each(|(t, x)| *t += sign * x);
                }
                if normalize(&mut s1) {
                    u1 = s1;
                }
                if normalize(&mut s2) {
                    u2 = s2;
                }
                let next = two_direction_objective(&coords, &u1, &u2);
                if next <= value + 1e-12 {
                    value = value.max(next);
                    break;
                }
                value = next;
            }
            (value, u1, u2)
        })
        .collect();
    let (best, u1, u2) = runs.into_iter().reduce(|a, b| if b.0 > a.0 { b } else { a }).expect("at least one restart");
    let value = local.sqrt() * best;
    let kind = if value <= onebit_upper_sqrt2(local) + 1e-9 { BoundKind::Upper } else { BoundKind::Lower };
    TwoDirectionEstimate { value, kind, u1, u2, restarts: restarts.max(1) }
}

/// Integer-scaled Gram matrix `k·V_x·V_y` and its scale `k`.
fn integer_gram(v: &VectorConfiguration) -> (Vec<i64>, usize, i64) {
    let m = v.len();
    let entries: Vec<Ratio<i64>> = (0..m).flat_map(|x| (0..m).map(move |y| (x, y))).map(|(x, y)| v.dot(x, y)).collect();
    let scale = entries.iter().fold(1i64, |acc, e| lcm(acc, *e.denom()));
    (entries.iter().map(|e| (e * scale).to_integer()).collect(), m, scale)
}

/// One-bit sign protocol: Alice's signs and messages, Bob's two sign vectors.
#[derive(Clone, Debug)]
struct SignProtocol {
    alice: Vec<i8>,
    message: Vec<u8>,
    bob: [Vec<i8>; 2],
}

impl SignProtocol {
    fn value(&self, gram: &[i64], m: usize) -> i64 {
        (0..m)
            .map(|x| {
                let b = &self.bob[self.message[x] as usize];
                i64::from(self.alice[x]) * (0..m).map(|y| gram[x * m + y] * i64::from(b[y])).sum::<i64>()
            })
            .sum()
    }

    /// Alice's best response: message and sign per input. Returns whether anything changed.
    fn respond_alice(&mut self, gram: &[i64], m: usize) -> bool {
        let mut changed = false;
        for x in 0..m {
            let field = |k: usize| (0..m).map(|y| gram[x * m + y] * i64::from(self.bob[k][y])).sum::<i64>();
            let f = [field(0), field(1)];
            let current = f[self.message[x] as usize] * i64::from(self.alice[x]);
            let (k, best) = if f[1].abs() > f[0].abs() { (1, f[1].abs()) } else { (0, f[0].abs()) };
            if best > current {
                self.message[x] = k as u8;
                self.alice[x] = if f[k] >= 0 { 1 } else { -1 };
                changed = true;
            }
        }
        changed
    }

    /// Bob's best response per message. Returns whether anything changed.
    fn respond_bob(&mut self, gram: &[i64], m: usize) -> bool {
        let mut changed = false;
        for k in 0..2 {
            for y in 0..m {
                let field: i64 = (0..m)
                    .filter(|&x| self.message[x] as usize == k)
                    .map(|x| gram[x * m + y] * i64::from(self.alice[x]))
                    .sum();
                let current = field * i64::from(self.bob[k][y]);
                if field.abs() > current {
                    self.bob[k][y] = if field >= 0 { 1 } else { -1 };
                    changed = true;
                }
            }
        }
        changed
    }

    fn seesaw(&mut self, gram: &[i64], m: usize, max_sweeps: usize) -> i64 {
        for _ in 0..max_sweeps {
            let a = self.respond_bob(gram, m);
            let b = self.respond_alice(gram, m);
            if !a && !b {
                break;
            }
        }
        self.value(gram, m)
    }
}

/// Greedy protocol without randomness: sequential sign choice for
/// Alice, the message unused, and Bob's best response.
fn greedy(gram: &[i64], m: usize) -> SignProtocol {
    let mut alice = vec![1i8; m];
    for x in 1..m {
        let cross: i64 = (0..x).map(|j| gram[x * m + j] * i64::from(alice[j])).sum();
        alice[x] = if cross >= 0 { 1 } else { -1 };
    }
    let mut p = SignProtocol { alice, message: vec![0; m], bob: [vec![1; m], vec![1; m]] };
    p.respond_bob(gram, m);
    p
}

/// See-saw lower bound on the one-bit (Alice → Bob) value of the Platonic correlation
/// functional: alternating exact best responses over (message and signs of Alice) and
/// (Bob's two sign vectors), from random balanced bipartitions. `restarts = 0` returns
/// the deterministic greedy protocol.
///
/// Values are on the correlation scale: `Σ_xy M_xy a_x b^{l(x)}_y`.
pub fn onebit_signsearch_lower(v: &VectorConfiguration, restarts: usize, seed: u64) -> SeesawOutcome {
    let start = Instant::now();
    let (gram, m, scale) = integer_gram(v);
    let max_sweeps = 200;
    let runs: Vec<(i64, SignProtocol)> = if restarts == 0 {
        let mut p = greedy(&gram, m);
        vec![(p.seesaw(&gram, m, 0), p)]
    } else {
        (0..restarts)
            .into_par_iter()
            .map(|restart| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(restart as u64);
                let mut message: Vec<u8> = (0..m).map(|x| u8::from(x >= m / 2)).collect();
                message.shuffle(&mut rng);
                let mut sign = || if rng.gen::<bool>() { 1i8 } else { -1 };
                let alice = (0..m).map(|_| sign()).collect();
                let mut p = SignProtocol { alice, message, bob: [vec![1; m], vec![1; m]] };
                let value = p.seesaw(&gram, m, max_sweeps);
                (value, p)
            })
            .collect()
    };
    let mut histogram = BTreeMap::new();
    for (value, _) in &runs {
        *histogram.entry(*value).or_insert(0u64) += 1;
    }
    let (best_restart, (value, protocol)) =
        runs.into_iter().enumerate().reduce(|a, b| if b.1 .0 > a.1 .0 { b } else { a }).expect("at least one run");
    let user = Ratio::new(value, scale);
    let certificate =
        Certificate::SignProtocol { alice: protocol.alice, alice_message: protocol.message, bob: protocol.bob };
    let result = BoundResult::new(*user.numer(), *user.denom(), BoundKind::Lower, "one-bit sign see-saw")
        .with_certificate(certificate)
        .with_stats(start.elapsed(), restarts as u64);
    SeesawOutcome { result, best_restart, histogram }
}

/// Exact correlation value of a one-bit sign protocol certificate.
pub fn sign_protocol_value(v: &VectorConfiguration, alice: &[i8], message: &[u8], bob: &[Vec<i8>; 2]) -> Ratio<i64> {
    let m = v.len();
    (0..m)
        .flat_map(|x| (0..m).map(move |y| (x, y)))
        .map(|(x, y)| v.dot(x, y) * i64::from(alice[x]) * i64::from(bob[message[x] as usize][y]))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{onebit_bound, Budget};
    use crate::model::{CorrelationFunctional, Direction};

    fn cube_diagonals() -> VectorConfiguration {
        VectorConfiguration::from_integers(&[vec![1, 1, 1], vec![1, 1, -1], vec![1, -1, 1], vec![-1, 1, 1]]).unwrap()
    }

    #[test]
    fn sqrt2_bound_exact_comparison() {
        assert!(sqrt2_local_below(Ratio::from_integer(399), 565));
        assert!(!sqrt2_local_below(Ratio::from_integer(399), 564));
        assert!((onebit_upper_sqrt2(399.0) - 564.2712).abs() < 1e-3);
    }

    #[test]
    fn small_configurations_match_exact_onebit() {
        let configs = [
            VectorConfiguration::from_integers(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap(),
            VectorConfiguration::from_integers(&[
                vec![1, 1, 0],
                vec![1, -1, 0],
                vec![1, 0, 1],
                vec![1, 0, -1],
                vec![0, 1, 1],
                vec![0, 1, -1],
            ])
            .unwrap(),
            cube_diagonals(),
        ];
        for v in configs {
            let c = CorrelationFunctional::from_factor(&v);
            let form = c.to_probability().unwrap();
            let exact = onebit_bound(&form.functional, Direction::AliceToBob, Budget::unlimited()).unwrap();
            let exact = form.correlation_value(exact.value);
            let heuristic = onebit_signsearch_lower(&v, 200, 3);
            assert_eq!(heuristic.result.user_value(), exact);
            let Certificate::SignProtocol { alice, alice_message, bob } = &heuristic.result.certificate else {
                panic!("certificate")
            };
            assert_eq!(sign_protocol_value(&v, alice, alice_message, bob), exact);
        }
    }

    #[test]
    fn zero_restarts_is_greedy_and_sound() {
        let v = crate::platonic::e7_vectors();
        let greedy = onebit_signsearch_lower(&v, 0, 0);
        assert!(greedy.result.user_value() <= Ratio::from_integer(564));
        assert!(greedy.result.user_value() >= Ratio::from_integer(1));
    }

    #[test]
    fn equal_directions_reduce_to_local() {
        let v = crate::platonic::e7_vectors();
        let coords = v.orthonormal_coordinates();
        let u = coords[0].clone();
        let single: f64 = coords.iter().map(|c| dot(&u, c).abs()).sum();
        assert!((two_direction_objective(&coords, &u, &u) - single).abs() < 1e-12);
        assert!(399f64.sqrt() * single <= 399.0 + 1e-9);
    }
}

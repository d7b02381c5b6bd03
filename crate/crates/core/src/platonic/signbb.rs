use std::sync::atomic::{AtomicI64, Ordering};
use std::sync::Mutex;

use rayon::prelude::*;

use crate::classical::{BoundKind, BoundResult, Budget, Certificate, Meter};
use crate::error::{Error, Result};
use crate::platonic::VectorConfiguration;

/// Nodes visited between budget checks.
const CHARGE_BATCH: u64 = 1 << 12;

/// Suffix problems at least this long are split into parallel prefix tasks.
const PARALLEL_MIN_LEN: usize = 24;

/// Prefix depth of the parallel split.
const SPLIT_DEPTH: usize = 10;

/// Vectors in branching order with their integer Gram matrix.
struct Problem {
    order: Vec<usize>,
    gram: Vec<i64>,
    m: usize,
}

impl Problem {
    fn new(rows: &[Vec<i64>]) -> Self {
        let m = rows.len();
        let dot = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<i64>();
        let raw: Vec<i64> =
            (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).map(|(i, j)| dot(&rows[i], &rows[j])).collect();
        // Descending interaction Σ_j |z_i·z_j|, ties by index.
        let mut order: Vec<usize> = (0..m).collect();
        let weight = |i: usize| (0..m).map(|j| raw[i * m + j].abs()).sum::<i64>();
        order.sort_by_key(|&i| (std::cmp::Reverse(weight(i)), i));
        let gram =
            (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).map(|(i, j)| raw[order[i] * m + order[j]]).collect();
        Self { order, gram, m }
    }

    fn g(&self, i: usize, j: usize) -> i64 {
        self.gram[i * self.m + j]
    }
}

/// Partial assignment over positions `k..i` of the branching order.
#[derive(Clone)]
struct Node {
    i: usize,
    norm: i64,
    /// `d[j] = p·z_j` for the current partial sum `p`.
    dots: Vec<i64>,
    signs: Vec<i8>,
}

impl Node {
    fn root(pb: &Problem, k: usize) -> Self {
        let mut signs = vec![0; pb.m];
        signs[k] = 1;
        Node { i: k + 1, norm: pb.g(k, k), dots: (0..pb.m).map(|j| pb.g(k, j)).collect(), signs }
    }

    fn child(&self, pb: &Problem, s: i8) -> Self {
        let i = self.i;
        let s64 = i64::from(s);
        let mut dots = self.dots.clone();
        for (j, d) in dots.iter_mut().enumerate().skip(i + 1) {
            *d += s64 * pb.g(i, j);
        }
        let mut signs = self.signs.clone();
        signs[i] = s;
        Node { i: i + 1, norm: self.norm + 2 * s64 * self.dots[i] + pb.g(i, i), dots, signs }
    }
}

/// Solver state shared by the Russian-doll levels.
struct Doll<'a> {
    pb: &'a Problem,
    /// `best[k]`: exact max of `‖Σ_{j≥k} s_j z_j‖²`, filled from the back.
    best: Vec<i64>,
    meter: &'a Meter,
}

impl Doll<'_> {
    /// Admissible bound on any completion of `node` within suffix `k..`.
    fn bound(&self, node: &Node) -> i64 {
        let rest = self.best[node.i];
        let linear: i64 = node.dots[node.i..].iter().map(|d| d.abs()).sum();
        let quadratic = node.norm + 2 * linear + rest;
        // ‖p + q‖ ≤ ‖p‖ + ‖q‖; the float slack keeps the integer bound admissible.
        let triangle = (node.norm as f64).sqrt() + (rest as f64).sqrt();
        let triangle = (triangle * triangle + 1e-6).floor() as i64;
        quadratic.min(triangle)
    }

    /// Depth-first search below `node`; raises `incumbent` only on strict improvement.
    fn dfs(&self, node: Node, incumbent: &AtomicI64, witness: &Mutex<Option<Vec<i8>>>, counter: &mut u64) -> bool {
        *counter += 1;
        if *counter >= CHARGE_BATCH {
            let ok = self.meter.charge(*counter);
            *counter = 0;
            if !ok {
                return false;
            }
        } else if self.meter.is_aborted() {
            return false;
        }
        if node.i == self.pb.m {
            if node.norm > incumbent.fetch_max(node.norm, Ordering::SeqCst) {
                let mut w = witness.lock().expect("witness lock");
                // Another worker may have raced past; keep the witness of the max.
                if incumbent.load(Ordering::SeqCst) == node.norm {
                    *w = Some(node.signs);
                }
            }
            return true;
        }
        if self.bound(&node) <= incumbent.load(Ordering::Relaxed) {
            return true;
        }
        let first: i8 = if node.dots[node.i] >= 0 { 1 } else { -1 };
        for s in [first, -first] {
            if !self.dfs(node.child(self.pb, s), incumbent, witness, counter) {
                return false;
            }
        }
        true
    }

    /// Expands the top of suffix `k` into independent prefixes (pruned against `incumbent`).
    fn prefixes(&self, k: usize, incumbent: i64) -> Vec<Node> {
        let depth = SPLIT_DEPTH.min(self.pb.m - k - 1);
        let mut frontier = vec![Node::root(self.pb, k)];
        for _ in 0..depth {
            frontier = frontier
                .into_iter()
                .flat_map(|n| {
                    let first: i8 = if n.dots[n.i] >= 0 { 1 } else { -1 };
                    [n.child(self.pb, first), n.child(self.pb, -first)]
                })
                .filter(|n| n.i == self.pb.m || self.bound(n) > incumbent)
                .collect();
        }
        frontier
    }

    /// Solves suffix `k` given its starting witness; returns false if the budget ran out.
    fn solve(&mut self, k: usize, start: (i64, Vec<i8>)) -> (bool, i64, Vec<i8>) {
        let incumbent = AtomicI64::new(start.0);
        let witness = Mutex::new(None);
        let len = self.pb.m - k;
        let complete = if len >= PARALLEL_MIN_LEN {
            let tasks = self.prefixes(k, start.0);
            let this = &*self;
            tasks
                .into_par_iter()
                .map(|node| {
                    let mut counter = 0;
                    let ok = this.dfs(node, &incumbent, &witness, &mut counter);
                    this.meter.charge(counter);
                    ok
                })
                .collect::<Vec<_>>()
                .into_iter()
                .all(|ok| ok)
        } else {
            let mut counter = 0;
            let ok = self.dfs(Node::root(self.pb, k), &incumbent, &witness, &mut counter);
            self.meter.charge(counter);
            ok
        };
        let value = incumbent.load(Ordering::SeqCst);
        let signs = witness.into_inner().expect("witness lock").unwrap_or(start.1);
        (complete, value, signs)
    }
}

/// Witness for suffix `k` built from the suffix `k+1` optimum: orient it towards `z_k`.
fn extend(pb: &Problem, k: usize, value: i64, signs: &[i8]) -> (i64, Vec<i8>) {
    let cross: i64 = (k + 1..pb.m).map(|j| i64::from(signs[j]) * pb.g(k, j)).sum();
    let flip: i8 = if cross >= 0 { 1 } else { -1 };
    let mut out = signs.to_vec();
    out[k] = 1;
    out[k + 1..].iter_mut().for_each(|s| *s *= flip);
    (value + pb.g(k, k) + 2 * cross.abs(), out)
}

/// Value of a full sign vector in positions `from..` (other entries ignored).
fn suffix_value(pb: &Problem, from: usize, signs: &[i8]) -> i64 {
    (from..pb.m)
        .flat_map(|i| (from..pb.m).map(move |j| (i, j)))
        .map(|(i, j)| i64::from(signs[i]) * i64::from(signs[j]) * pb.g(i, j))
        .sum()
}

/// Greedy completion followed by single-flip ascent; used when the budget runs out.
fn polish(pb: &Problem, mut signs: Vec<i8>, from: usize) -> Vec<i8> {
    for i in (0..from).rev() {
        let cross: i64 = (i + 1..pb.m).map(|j| i64::from(signs[j]) * pb.g(i, j)).sum();
        signs[i] = if cross >= 0 { 1 } else { -1 };
    }
    loop {
        let mut improved = false;
        for i in 0..pb.m {
            let cross: i64 = (0..pb.m).filter(|&j| j != i).map(|j| i64::from(signs[j]) * pb.g(i, j)).sum();
            if i64::from(signs[i]) * cross < 0 {
                signs[i] = -signs[i];
                improved = true;
            }
        }
        if !improved {
            return signs;
        }
    }
}

/// Exact `L = max_s ‖Σ s_i V_i‖²` over sign vectors, by Russian-doll branch and bound:
/// suffixes of the branching order are solved from the back, and each exact suffix
/// optimum feeds the bound `‖p‖² + 2Σ_j|p·z_j| + L(suffix)` of the longer problems.
///
/// For the positive-semidefinite Gram matrix `M` this equals the correlation local
/// bound `max_{a,b} aᵀMb`; the certificate uses the same signs on both sides.
pub fn sign_local_bound(v: &VectorConfiguration, budget: Budget) -> Result<BoundResult> {
    let (rows, factor) = v.integer_form();
    let max_norm = rows.iter().map(|r| r.iter().map(|c| c * c).sum::<i64>()).max().unwrap_or(0);
    let m = rows.len() as i64;
    if max_norm.checked_mul(m * m).is_none() {
        return Err(Error::TooLarge("sign search values overflow 64-bit integers".into()));
    }
    let pb = Problem::new(&rows);
    let meter = Meter::new(budget);
    let mut doll = Doll { pb: &pb, best: vec![0; pb.m + 1], meter: &meter };
    let mut witness = vec![0i8; pb.m];
    let mut done_from = pb.m;
    for k in (0..pb.m).rev() {
        let start = if k + 1 == pb.m {
            let mut s = vec![0; pb.m];
            s[k] = 1;
            (pb.g(k, k), s)
        } else {
            extend(&pb, k, doll.best[k + 1], &witness)
        };
        let (complete, value, signs) = doll.solve(k, start);
        if !complete {
            break;
        }
        doll.best[k] = value;
        witness = signs;
        done_from = k;
    }
    let (value, signs, kind) = if done_from == 0 {
        (doll.best[0], witness, BoundKind::Exact)
    } else {
        let signs = polish(&pb, witness, done_from);
        (suffix_value(&pb, 0, &signs), signs, BoundKind::Lower)
    };
    debug_assert_eq!(suffix_value(&pb, 0, &signs), value);

    let mut original = vec![0i8; pb.m];
    for (pos, &idx) in pb.order.iter().enumerate() {
        original[idx] = signs[pos];
    }
    let user = factor * value;
    Ok(BoundResult::new(*user.numer(), *user.denom(), kind, "sign branch-and-bound")
        .with_certificate(Certificate::Signs { alice: original.clone(), bob: original })
        .with_stats(meter.elapsed(), meter.nodes()))
}

/// Value `‖Σ s_i V_i‖²` of a sign vector, exact.
pub fn sign_value(v: &VectorConfiguration, signs: &[i8]) -> num_rational::Ratio<i64> {
    let m = v.len();
    (0..m)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .map(|(i, j)| v.dot(i, j) * i64::from(signs[i]) * i64::from(signs[j]))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CorrelationFunctional;
    use num_rational::Ratio;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute(v: &VectorConfiguration) -> Ratio<i64> {
        let m = v.len();
        (0u32..1 << m)
            .map(|mask| {
                let s: Vec<i8> = (0..m).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
                sign_value(v, &s)
            })
            .max()
            .unwrap()
    }

    fn random_config(rng: &mut ChaCha8Rng, m: usize, dim: usize) -> VectorConfiguration {
        // Integer vectors of equal squared length: pick from the shell of radius² = 9.
        let shell: Vec<Vec<i64>> = {
            let range = -3i64..=3;
            let mut out = Vec::new();
            for a in range.clone() {
                for b in range.clone() {
                    for c in range.clone() {
                        let v = [a, b, c];
                        if v.iter().map(|x| x * x).sum::<i64>() == 9 {
                            out.push(v[..dim].to_vec());
                        }
                    }
                }
            }
            out
        };
        let rows: Vec<Vec<i64>> = (0..m).map(|_| shell[rng.gen_range(0..shell.len())].clone()).collect();
        VectorConfiguration::from_integers(&rows).unwrap()
    }

    #[test]
    fn orthonormal_basis_gives_n() {
        let v = VectorConfiguration::from_integers(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        let r = sign_local_bound(&v, Budget::unlimited()).unwrap();
        assert_eq!(r.user_value(), Ratio::from_integer(3));
        assert_eq!(r.kind, BoundKind::Exact);
    }

    #[test]
    fn random_configurations_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let v = random_config(&mut rng, 8, 3);
            let r = sign_local_bound(&v, Budget::unlimited()).unwrap();
            assert_eq!(r.user_value(), brute(&v));
            let Certificate::Signs { alice, .. } = &r.certificate else { panic!("certificate") };
            assert_eq!(sign_value(&v, alice), r.user_value());
        }
    }

    #[test]
    fn matches_correlation_exhaustive() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let v = random_config(&mut rng, 10, 3);
            let c = CorrelationFunctional::from_factor(&v);
            let (exhaustive, _, _) = c.local_bound_exhaustive().unwrap();
            assert_eq!(sign_local_bound(&v, Budget::unlimited()).unwrap().user_value(), exhaustive);
        }
    }

    #[test]
    fn exhausted_budget_is_a_lower_bound() {
        let v = crate::platonic::e7_vectors();
        let r = sign_local_bound(&v, Budget::nodes(1000)).unwrap();
        assert_eq!(r.kind, BoundKind::Lower);
        let Certificate::Signs { alice, .. } = &r.certificate else { panic!("certificate") };
        assert_eq!(sign_value(&v, alice), r.user_value());
        assert!(r.user_value() <= Ratio::from_integer(399));
    }
}

//! Exact local bound by branch-and-bound over one party's outputs.
//!
//! One party (the "branching" side) is assigned input by input; the other side's
//! best response is closed-form. At a partial assignment the admissible bound is
//! `Σ_j max_q [Σ_{i assigned} W(p_i, q | i, j) + Σ_{i open} max_p W(p, q | i, j)]`.

use std::cmp::Reverse;
use std::sync::atomic::{AtomicI64, Ordering};
use std::sync::Mutex;

use rayon::prelude::*;

use super::budget::Meter;
use super::game::Game;

/// Best assignment found by a search, on the original game's orientation.
#[derive(Clone, Debug)]
pub(crate) struct Found {
    pub value: i64,
    pub alice: Vec<usize>,
    pub bob: Vec<usize>,
}

pub(crate) struct Outcome {
    /// Best assignment strictly above the floor, if any was found.
    pub found: Option<Found>,
    pub complete: bool,
}

/// Local search problem: Alice restricted to `rows`, Bob unrestricted.
struct Oriented {
    /// Branching side inputs, in search order (original indices).
    order: Vec<usize>,
    branch_outputs: usize,
    resp_inputs: usize,
    resp_outputs: usize,
    /// `w[((i * resp_inputs + j) * branch_outputs + p) * resp_outputs + q]`, `i` in search order.
    w: Vec<i64>,
    /// `rem[(k * resp_inputs + j) * resp_outputs + q]`: optimistic completion from depth k.
    rem: Vec<i64>,
    branch_is_alice: bool,
}

impl Oriented {
    fn new(game: &Game, rows: &[usize]) -> Self {
        // Branch over the side with the smaller raw search space.
        let alice_space = rows.len() as f64 * (game.outputs_a as f64).ln();
        let bob_space = game.inputs_b as f64 * (game.outputs_b as f64).ln();
        let branch_is_alice = alice_space <= bob_space;
        let (branch, resp): (Vec<usize>, Vec<usize>) = if branch_is_alice {
            (rows.to_vec(), (0..game.inputs_b).collect())
        } else {
            ((0..game.inputs_b).collect(), rows.to_vec())
        };
        let (po, qo) =
            if branch_is_alice { (game.outputs_a, game.outputs_b) } else { (game.outputs_b, game.outputs_a) };
        let value = |i: usize, j: usize, p: usize, q: usize| {
            if branch_is_alice {
                game.at(i, j, p, q)
            } else {
                game.at(j, i, q, p)
            }
        };

        // Inputs whose best and typical contributions differ most go first.
        let mut scored: Vec<(i64, usize)> = branch
            .iter()
            .map(|&i| {
                let spread: i64 = resp
                    .iter()
                    .map(|&j| {
                        let all: Vec<i64> = (0..po)
                            .flat_map(|p| (0..qo).map(move |q| (p, q)))
                            .map(|(p, q)| value(i, j, p, q))
                            .collect();
                        let max = all.iter().copied().max().unwrap_or(0);
                        max * all.len() as i64 - all.iter().sum::<i64>()
                    })
                    .sum();
                (-spread, i)
            })
            .collect();
        scored.sort();
        let order: Vec<usize> = scored.into_iter().map(|(_, i)| i).collect();

        let (n, m) = (order.len(), resp.len());
        let mut w = vec![0; n * m * po * qo];
        for (ii, &i) in order.iter().enumerate() {
            for (jj, &j) in resp.iter().enumerate() {
                for p in 0..po {
                    for q in 0..qo {
                        w[((ii * m + jj) * po + p) * qo + q] = value(i, j, p, q);
                    }
                }
            }
        }
        let mut rem = vec![0; (n + 1) * m * qo];
        for k in (0..n).rev() {
            for j in 0..m {
                for q in 0..qo {
                    let best = (0..po).map(|p| w[((k * m + j) * po + p) * qo + q]).max().unwrap_or(0);
                    rem[(k * m + j) * qo + q] = rem[((k + 1) * m + j) * qo + q] + best;
                }
            }
        }
        Oriented { order, branch_outputs: po, resp_inputs: m, resp_outputs: qo, w, rem, branch_is_alice }
    }

    #[inline]
    fn slab(&self, depth: usize, p: usize, j: usize) -> &[i64] {
        let (m, po, qo) = (self.resp_inputs, self.branch_outputs, self.resp_outputs);
        let start = ((depth * m + j) * po + p) * qo;
        &self.w[start..start + qo]
    }

    #[inline]
    fn rem_at(&self, depth: usize, j: usize) -> &[i64] {
        let start = (depth * self.resp_inputs + j) * self.resp_outputs;
        &self.rem[start..start + self.resp_outputs]
    }

    /// Bound after assigning output `p` at `depth` on top of `acc`.
    #[inline]
    fn child_bound(&self, acc: &[i64], depth: usize, p: usize) -> i64 {
        let qo = self.resp_outputs;
        let mut total = 0;
        for j in 0..self.resp_inputs {
            let a = &acc[j * qo..(j + 1) * qo];
            let s = self.slab(depth, p, j);
            let r = self.rem_at(depth + 1, j);
            let mut best = i64::MIN;
            for q in 0..qo {
                best = best.max(a[q] + s[q] + r[q]);
            }
            total += best;
        }
        total
    }

    fn push(&self, acc: &[i64], depth: usize, p: usize, out: &mut [i64]) {
        let qo = self.resp_outputs;
        for j in 0..self.resp_inputs {
            let s = self.slab(depth, p, j);
            for q in 0..qo {
                out[j * qo + q] = acc[j * qo + q] + s[q];
            }
        }
    }

    /// Converts a full branching assignment into strategies on the original game.
    fn strategies(&self, game: &Game, assignment: &[usize], acc: &[i64]) -> Found {
        let qo = self.resp_outputs;
        let mut branch_map = vec![0; if self.branch_is_alice { game.inputs_a } else { game.inputs_b }];
        for (k, &i) in self.order.iter().enumerate() {
            branch_map[i] = assignment[k];
        }
        let mut value = 0;
        let mut resp_local = vec![0; self.resp_inputs];
        for j in 0..self.resp_inputs {
            let (q, v) = super::game::argmax(&acc[j * qo..(j + 1) * qo]);
            resp_local[j] = q;
            value += v;
        }
        if self.branch_is_alice {
            Found { value, alice: branch_map, bob: resp_local }
        } else {
            // Responder is Alice restricted to `rows`; recover original indices via the game.
            Found { value, alice: resp_local, bob: branch_map }
        }
    }
}

struct Shared<'a> {
    best: AtomicI64,
    found: Mutex<Option<Found>>,
    meter: &'a Meter,
}

impl Shared<'_> {
    fn offer(&self, candidate: Found) {
        let mut guard = self.found.lock().expect("incumbent lock");
        let current = guard.as_ref().map_or(i64::MIN, |f| f.value);
        if candidate.value > current {
            self.best.fetch_max(candidate.value, Ordering::Relaxed);
            *guard = Some(candidate);
        }
    }
}

/// Maximizes over deterministic strategies with Alice restricted to `rows`.
///
/// Only assignments with value strictly above `floor` are reported; `seed` is an
/// optional known-good assignment used to start the incumbent.
pub(crate) fn search(game: &Game, rows: &[usize], floor: i64, seed: Option<Found>, meter: &Meter) -> Outcome {
    let problem = Oriented::new(game, rows);
    let shared = Shared { best: AtomicI64::new(floor), found: Mutex::new(None), meter };
    if let Some(seed) = seed {
        if seed.value > floor {
            // Internal incumbents index a responding Alice by position in `rows`.
            let seed = if problem.branch_is_alice {
                seed
            } else {
                Found { alice: rows.iter().map(|&x| seed.alice[x]).collect(), ..seed }
            };
            shared.offer(seed);
        }
    }

    let n = problem.order.len();
    let po = problem.branch_outputs;
    let threads = rayon::current_num_threads().max(1);
    let mut split = 0;
    let mut tasks = 1usize;
    while split < n && tasks < 64 * threads {
        split += 1;
        tasks = tasks.saturating_mul(po);
    }

    let acc0 = vec![0; problem.resp_inputs * problem.resp_outputs];
    // Enumerate prefixes of length `split` and their bounds.
    let mut prefixes: Vec<(i64, Vec<usize>, Vec<i64>)> = vec![(i64::MAX, Vec::new(), acc0)];
    for depth in 0..split {
        let mut next = Vec::with_capacity(prefixes.len() * po);
        for (_, prefix, acc) in &prefixes {
            for p in 0..po {
                let bound = problem.child_bound(acc, depth, p);
                let mut child = vec![0; acc.len()];
                problem.push(acc, depth, p, &mut child);
                let mut pre = prefix.clone();
                pre.push(p);
                next.push((bound, pre, child));
            }
        }
        prefixes = next;
    }
    prefixes.sort_by_key(|p| Reverse(p.0));

    prefixes.into_par_iter().for_each(|(bound, prefix, acc)| {
        if meter.is_aborted() || bound <= shared.best.load(Ordering::Relaxed) {
            return;
        }
        let mut worker = Worker::new(&problem, game, &shared);
        worker.assignment[..prefix.len()].copy_from_slice(&prefix);
        worker.accs[prefix.len()].copy_from_slice(&acc);
        worker.dfs(prefix.len());
        worker.flush();
    });

    let complete = !meter.is_aborted();
    let found = shared.found.into_inner().expect("incumbent lock").filter(|f| f.value > floor);
    let found = found.map(|f| {
        if problem.branch_is_alice {
            f
        } else {
            // Map the responder's local indices back to Alice's original inputs.
            let mut alice = vec![0; game.inputs_a];
            for (j, &x) in rows.iter().enumerate() {
                alice[x] = f.alice[j];
            }
            Found { alice, ..f }
        }
    });
    Outcome { found, complete }
}

struct Worker<'a> {
    problem: &'a Oriented,
    game: &'a Game,
    shared: &'a Shared<'a>,
    assignment: Vec<usize>,
    accs: Vec<Vec<i64>>,
    children: Vec<Vec<(i64, usize)>>,
    pending: u64,
}

impl<'a> Worker<'a> {
    fn new(problem: &'a Oriented, game: &'a Game, shared: &'a Shared<'a>) -> Self {
        let n = problem.order.len();
        let width = problem.resp_inputs * problem.resp_outputs;
        Worker {
            problem,
            game,
            shared,
            assignment: vec![0; n],
            accs: vec![vec![0; width]; n + 1],
            children: vec![Vec::with_capacity(problem.branch_outputs); n],
            pending: 0,
        }
    }

    fn flush(&mut self) -> bool {
        let ok = self.shared.meter.charge(self.pending);
        self.pending = 0;
        ok
    }

    fn dfs(&mut self, depth: usize) {
        self.pending += 1;
        if self.pending >= 4096 && !self.flush() {
            return;
        }
        let n = self.problem.order.len();
        if depth == n {
            let found = self.problem.strategies(self.game, &self.assignment, &self.accs[n]);
            if found.value > self.shared.best.load(Ordering::Relaxed) {
                self.shared.offer(found);
            }
            return;
        }
        let mut children = std::mem::take(&mut self.children[depth]);
        children.clear();
        let incumbent = self.shared.best.load(Ordering::Relaxed);
        for p in 0..self.problem.branch_outputs {
            let bound = self.problem.child_bound(&self.accs[depth], depth, p);
            if bound > incumbent {
                children.push((bound, p));
            }
        }
        children.sort_by_key(|c| Reverse(c.0));
        for &(bound, p) in &children {
            if bound <= self.shared.best.load(Ordering::Relaxed) || self.shared.meter.is_aborted() {
                break;
            }
            let (head, tail) = self.accs.split_at_mut(depth + 1);
            self.problem.push(&head[depth], depth, p, &mut tail[0]);
            self.assignment[depth] = p;
            self.dfs(depth + 1);
        }
        self.children[depth] = children;
    }
}

//! Seeded see-saw searches giving certified lower bounds on large instances.
//!
//! Every sub-update is an exact best response, so the objective never decreases
//! within a restart. A choice only changes on a strict improvement, so a sweep with
//! no change is a fixed point and the loop terminates.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classical::Found;
use crate::classical::{BoundKind, BoundResult, Certificate, Game};
use crate::error::{Error, Result};
use crate::model::{BellFunctional, DeterministicStrategy, Direction, MessageProtocol};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub seed: u64,
    pub restarts: usize,
    pub max_sweeps: usize,
    pub direction: Direction,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { seed: 0, restarts: 100, max_sweeps: 200, direction: Direction::AliceToBob }
    }
}

impl SearchConfig {
    pub fn new(seed: u64, restarts: usize) -> Self {
        Self { seed, restarts, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidArgument("see-saw needs at least one restart".into()));
        }
        Ok(())
    }

    /// Independent generator for one restart; restart order cannot affect it.
    pub(crate) fn rng(&self, restart: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(restart as u64);
        rng
    }
}

/// Best result of a multistart search plus the distribution of per-restart values.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeesawOutcome {
    pub result: BoundResult,
    /// Restart that produced the reported certificate.
    pub best_restart: usize,
    /// Per-restart final value (internal scale) → number of restarts.
    pub histogram: BTreeMap<i64, u64>,
}

/// Keeps `current` unless another index is strictly better; otherwise lowest index wins.
#[inline]
fn choose(scores: &[i64], current: usize) -> usize {
    let (best, value) = crate::classical::argmax(scores);
    if scores[current] == value {
        current
    } else {
        best
    }
}

/// Bob's best response per input to Alice's outputs on `rows`. Returns whether anything changed.
fn respond_b(game: &Game, rows: &[usize], alice: &[usize], bob: &mut [usize], scores: &mut Vec<i64>) -> bool {
    let ob = game.outputs_b;
    scores.resize(ob, 0);
    let mut changed = false;
    for (y, slot) in bob.iter_mut().enumerate() {
        scores.iter_mut().for_each(|s| *s = 0);
        for &x in rows {
            let row = &game.block(x, y)[alice[x] * ob..(alice[x] + 1) * ob];
            scores.iter_mut().zip(row).for_each(|(s, &c)| *s += c);
        }
        let next = choose(scores, *slot);
        changed |= next != *slot;
        *slot = next;
    }
    changed
}

fn respond_a(game: &Game, rows: &[usize], bob: &[usize], alice: &mut [usize], scores: &mut Vec<i64>) -> bool {
    let (oa, ob) = (game.outputs_a, game.outputs_b);
    scores.resize(oa, 0);
    let mut changed = false;
    for &x in rows {
        scores.iter_mut().for_each(|s| *s = 0);
        for (y, &b) in bob.iter().enumerate() {
            let block = game.block(x, y);
            for (a, s) in scores.iter_mut().enumerate() {
                *s += block[a * ob + b];
            }
        }
        let next = choose(scores, alice[x]);
        changed |= next != alice[x];
        alice[x] = next;
    }
    changed
}

/// One local see-saw restart from a random Bob map.
fn local_restart(game: &Game, rows: &[usize], rng: &mut ChaCha8Rng, max_sweeps: usize) -> Found {
    let mut bob: Vec<usize> = (0..game.inputs_b).map(|_| rng.gen_range(0..game.outputs_b)).collect();
    let mut alice = vec![0; game.inputs_a];
    let mut scores = Vec::new();
    respond_a(game, rows, &bob, &mut alice, &mut scores);
    for _ in 0..max_sweeps {
        let b = respond_b(game, rows, &alice, &mut bob, &mut scores);
        let a = respond_a(game, rows, &bob, &mut alice, &mut scores);
        if !a && !b {
            break;
        }
    }
    Found { value: game.value_on(rows, &alice, &bob), alice, bob }
}

/// Fast deterministic incumbent for the exact searches.
pub(crate) fn quick_local(game: &Game, rows: &[usize]) -> Found {
    let cfg = SearchConfig::new(0x5eed, 8);
    (0..cfg.restarts)
        .map(|r| local_restart(game, rows, &mut cfg.rng(r), cfg.max_sweeps))
        .reduce(|a, b| if b.value > a.value { b } else { a })
        .expect("at least one restart")
}

fn oriented(f: &BellFunctional, direction: Direction) -> Result<Game> {
    let game = Game::from_functional(f)?;
    Ok(match direction {
        Direction::AliceToBob => game,
        Direction::BobToAlice => game.transposed(),
    })
}

/// Multistart alternating best responses for the local bound.
pub fn seesaw_local(f: &BellFunctional, cfg: &SearchConfig) -> Result<SeesawOutcome> {
    cfg.validate()?;
    let start = Instant::now();
    let game = Game::from_functional(f)?;
    let rows: Vec<usize> = (0..game.inputs_a).collect();
    let runs: Vec<Found> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| local_restart(&game, &rows, &mut cfg.rng(r), cfg.max_sweeps))
        .collect();
    let (best_restart, histogram) = reduce(runs.iter().map(|r| r.value));
    let best = &runs[best_restart];
    let result = BoundResult::new(best.value, f.denominator(), BoundKind::Lower, "seesaw-local")
        .with_certificate(Certificate::Strategy(DeterministicStrategy::new(best.alice.clone(), best.bob.clone())))
        .with_stats(start.elapsed(), cfg.restarts as u64);
    Ok(SeesawOutcome { result, best_restart, histogram })
}

/// Highest value wins; the lowest restart index breaks ties.
fn reduce(values: impl Iterator<Item = i64>) -> (usize, BTreeMap<i64, u64>) {
    let mut histogram = BTreeMap::new();
    let mut best: Option<(i64, usize)> = None;
    for (i, v) in values.enumerate() {
        *histogram.entry(v).or_insert(0) += 1;
        if best.is_none_or(|(bv, _)| v > bv) {
            best = Some((v, i));
        }
    }
    (best.map_or(0, |(_, i)| i), histogram)
}

/// State of a one-bit see-saw restart (sender is Alice of the oriented game).
#[derive(Clone, Debug)]
pub(crate) struct OneBitState {
    pub message: Vec<usize>,
    pub sender: Vec<usize>,
    pub responders: [Vec<usize>; 2],
    pub value: i64,
}

impl OneBitState {
    pub(crate) fn evaluate(&self, game: &Game) -> i64 {
        (0..game.inputs_a)
            .map(|x| {
                let r = &self.responders[self.message[x]];
                (0..game.inputs_b).map(|y| game.at(x, y, self.sender[x], r[y])).sum::<i64>()
            })
            .sum()
    }

    pub(crate) fn into_protocol(self, direction: Direction) -> MessageProtocol {
        let mut blocks = vec![Vec::new(), Vec::new()];
        for (x, &m) in self.message.iter().enumerate() {
            blocks[m].push(x);
        }
        let mut responders = Vec::new();
        let mut kept = Vec::new();
        for (m, block) in blocks.into_iter().enumerate() {
            if !block.is_empty() {
                kept.push(block);
                responders.push(self.responders[m].clone());
            }
        }
        MessageProtocol { direction, blocks: kept, sender: self.sender, responders }
    }
}

fn onebit_restart(game: &Game, rng: &mut ChaCha8Rng, max_sweeps: usize) -> OneBitState {
    let m = game.inputs_a;
    // Random balanced bipartition.
    let mut order: Vec<usize> = (0..m).collect();
    for i in (1..m).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let mut message = vec![0; m];
    for &x in &order[m / 2..] {
        message[x] = 1;
    }
    let mut sender: Vec<usize> = (0..m).map(|_| rng.gen_range(0..game.outputs_a)).collect();
    let mut responders = [vec![0; game.inputs_b], vec![0; game.inputs_b]];
    let mut scores = Vec::new();
    let (oa, ob) = (game.outputs_a, game.outputs_b);
    let mut pair_scores = vec![0i64; 2 * oa];

    for sweep in 0..max_sweeps {
        let mut changed = false;
        for msg in 0..2 {
            let rows: Vec<usize> = (0..m).filter(|&x| message[x] == msg).collect();
            changed |= respond_b(game, &rows, &sender, &mut responders[msg], &mut scores);
        }
        // Joint exact update of each sender input's message and output.
        for x in 0..m {
            pair_scores.iter_mut().for_each(|s| *s = 0);
            for msg in 0..2 {
                for (y, &b) in responders[msg].iter().enumerate() {
                    let block = game.block(x, y);
                    for a in 0..oa {
                        pair_scores[msg * oa + a] += block[a * ob + b];
                    }
                }
            }
            let current = message[x] * oa + sender[x];
            let next = choose(&pair_scores, current);
            if next != current {
                changed = true;
                message[x] = next / oa;
                sender[x] = next % oa;
            }
        }
        if !changed && sweep > 0 {
            break;
        }
    }
    let mut state = OneBitState { message, sender, responders, value: 0 };
    state.value = state.evaluate(game);
    state
}

/// Best one-bit protocol over `restarts` seeded restarts, as a lower bound.
pub(crate) fn onebit_on_game(game: &Game, cfg: &SearchConfig) -> (usize, BTreeMap<i64, u64>, OneBitState) {
    let runs: Vec<OneBitState> =
        (0..cfg.restarts).into_par_iter().map(|r| onebit_restart(game, &mut cfg.rng(r), cfg.max_sweeps)).collect();
    let (best_restart, histogram) = reduce(runs.iter().map(|r| r.value));
    let best = runs.into_iter().nth(best_restart).expect("best restart exists");
    (best_restart, histogram, best)
}

/// Multistart see-saw over one-bit protocols in the configured direction.
pub fn seesaw_onebit(f: &BellFunctional, cfg: &SearchConfig) -> Result<SeesawOutcome> {
    cfg.validate()?;
    let start = Instant::now();
    let game = oriented(f, cfg.direction)?;
    let (best_restart, histogram, best) = onebit_on_game(&game, cfg);
    let value = best.value;
    let protocol = best.into_protocol(cfg.direction);
    let method = format!("seesaw-onebit {}", cfg.direction.label());
    let result = BoundResult::new(value, f.denominator(), BoundKind::Lower, method)
        .with_certificate(Certificate::Protocol(protocol))
        .with_stats(start.elapsed(), cfg.restarts as u64);
    Ok(SeesawOutcome { result, best_restart, histogram })
}

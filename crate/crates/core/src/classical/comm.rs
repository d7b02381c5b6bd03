//! One-way communication bounds by enumerating partitions of the sender's inputs.
//!
//! A deterministic protocol with a `k`-valued message groups the sender's inputs by
//! the message they trigger; the responder then plays a separate strategy per block.
//! The bound is therefore `max over partitions into ≤ k blocks of Σ_blocks L(block)`,
//! where `L(block)` is the local bound with the sender restricted to that block.

use std::collections::HashMap;

use super::budget::Meter;
use super::game::Game;
use super::local::{self, Found};

#[derive(Clone, Debug)]
enum Known {
    Exact(Option<Found>, i64),
    AtMost(i64),
}

pub(crate) struct PartitionSearch<'a> {
    game: &'a Game,
    meter: &'a Meter,
    memo: HashMap<u64, Known>,
    max_blocks: usize,
    pub best: i64,
    pub best_blocks: Vec<(Vec<usize>, Found)>,
    aborted: bool,
}

impl<'a> PartitionSearch<'a> {
    pub(crate) fn new(game: &'a Game, meter: &'a Meter, max_blocks: usize) -> Self {
        PartitionSearch {
            game,
            meter,
            memo: HashMap::new(),
            max_blocks,
            best: i64::MIN,
            best_blocks: Vec::new(),
            aborted: false,
        }
    }

    /// Cheap admissible upper bound on the restricted local bound of `rows`.
    fn upper(&self, rows: &[usize]) -> i64 {
        let g = self.game;
        let mut by_bob = 0;
        for y in 0..g.inputs_b {
            let mut best = i64::MIN;
            for b in 0..g.outputs_b {
                let s: i64 = rows.iter().map(|&x| (0..g.outputs_a).map(|a| g.at(x, y, a, b)).max().unwrap_or(0)).sum();
                best = best.max(s);
            }
            by_bob += best;
        }
        let mut by_alice = 0;
        for &x in rows {
            let mut best = i64::MIN;
            for a in 0..g.outputs_a {
                let s: i64 =
                    (0..g.inputs_b).map(|y| (0..g.outputs_b).map(|b| g.at(x, y, a, b)).max().unwrap_or(0)).sum();
                best = best.max(s);
            }
            by_alice += best;
        }
        by_bob.min(by_alice)
    }

    fn mask(rows: &[usize]) -> u64 {
        rows.iter().fold(0, |m, &x| m | 1 << x)
    }

    fn seed(&self, rows: &[usize]) -> Found {
        crate::heuristics::quick_local(self.game, rows)
    }

    /// Exact restricted local bound, memoized.
    fn exact(&mut self, rows: &[usize]) -> (i64, Option<Found>) {
        let key = Self::mask(rows);
        if let Some(Known::Exact(found, v)) = self.memo.get(&key) {
            return (*v, found.clone());
        }
        let seed = self.seed(rows);
        let floor = seed.value - 1;
        let out = local::search(self.game, rows, floor, Some(seed), self.meter);
        self.aborted |= !out.complete;
        let found = out.found.expect("seed exceeds its own floor");
        let v = found.value;
        self.memo.insert(key, Known::Exact(Some(found.clone()), v));
        (v, Some(found))
    }

    /// Restricted local bound if it exceeds `floor`, else `None` (proved `≤ floor`).
    fn above(&mut self, rows: &[usize], floor: i64) -> Option<Found> {
        let key = Self::mask(rows);
        match self.memo.get(&key) {
            Some(Known::Exact(found, v)) => return if *v > floor { found.clone() } else { None },
            Some(Known::AtMost(t)) if *t <= floor => return None,
            _ => {}
        }
        let seed = self.seed(rows);
        if seed.value > floor {
            let (_, found) = self.exact(rows);
            return found;
        }
        let out = local::search(self.game, rows, floor, Some(seed), self.meter);
        self.aborted |= !out.complete;
        match out.found {
            Some(found) => {
                self.memo.insert(key, Known::Exact(Some(found.clone()), found.value));
                Some(found)
            }
            None => {
                if out.complete {
                    self.memo.insert(key, Known::AtMost(floor));
                }
                None
            }
        }
    }

    /// Evaluates one partition, updating the incumbent when it is beaten.
    fn consider(&mut self, blocks: &[Vec<usize>]) {
        let uppers: Vec<i64> = blocks.iter().map(|b| self.upper(b)).collect();
        if uppers.iter().sum::<i64>() <= self.best {
            return;
        }
        // Tightest blocks last so the thresholded search carries the most slack.
        let mut order: Vec<usize> = (0..blocks.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(blocks[i].len()));
        let mut known = 0;
        let mut rest: i64 = uppers.iter().sum();
        let mut parts = Vec::with_capacity(blocks.len());
        for (pos, &i) in order.iter().enumerate() {
            rest -= uppers[i];
            if self.meter.is_aborted() {
                self.aborted = true;
                return;
            }
            if pos + 1 == order.len() {
                match self.above(&blocks[i], self.best - known) {
                    Some(found) => {
                        known += found.value;
                        parts.push((blocks[i].clone(), found));
                    }
                    None => return,
                }
            } else {
                let (v, found) = self.exact(&blocks[i]);
                known += v;
                parts.push((blocks[i].clone(), found.expect("exact search keeps its witness")));
                if known + rest <= self.best {
                    return;
                }
            }
        }
        if known > self.best {
            self.best = known;
            self.best_blocks = parts;
        }
    }

    /// Enumerates set partitions of `0..m` into at most `max_blocks` blocks.
    pub(crate) fn run(&mut self) -> bool {
        let m = self.game.inputs_a;
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        self.recurse(0, m, &mut blocks);
        !self.aborted && !self.meter.is_aborted()
    }

    fn recurse(&mut self, next: usize, m: usize, blocks: &mut Vec<Vec<usize>>) {
        if self.meter.is_aborted() {
            self.aborted = true;
            return;
        }
        if next == m {
            let snapshot = blocks.clone();
            self.consider(&snapshot);
            return;
        }
        for i in 0..blocks.len() {
            blocks[i].push(next);
            self.recurse(next + 1, m, blocks);
            blocks[i].pop();
        }
        if blocks.len() < self.max_blocks {
            blocks.push(vec![next]);
            self.recurse(next + 1, m, blocks);
            blocks.pop();
        }
    }

    pub(crate) fn seed_incumbent(&mut self, value: i64, blocks: Vec<(Vec<usize>, Found)>) {
        if value > self.best {
            self.best = value;
            self.best_blocks = blocks;
        }
    }
}

//! Exact classical bounds: local (L), one-bit (L1bit) and c-bit (Lcbit).

mod analytic;
mod budget;
mod comm;
mod game;
mod lemma;
mod local;
mod oracle;
mod result;

use std::time::Instant;

pub use analytic::{ambainis_upper, comm_factor_upper, critical_copies_exact, critical_copies_upper};
pub use budget::Budget;
pub(crate) use game::argmax;
pub use game::Game;
pub use lemma::{bipartition_lemma_check, bipartition_lemma_sampled};
pub(crate) use local::Found;
pub use oracle::onebit_bruteforce_oracle;
pub use result::{BoundKind, BoundResult, Certificate};

use crate::error::{Error, Result};
use crate::heuristics::{self, SearchConfig};
use crate::model::{BellFunctional, DeterministicStrategy, Direction, MessageProtocol};
pub(crate) use budget::Meter;
use comm::PartitionSearch;

fn kind(complete: bool) -> BoundKind {
    if complete {
        BoundKind::Exact
    } else {
        BoundKind::Lower
    }
}

/// Exact local bound with an optimal deterministic strategy.
pub fn local_bound(f: &BellFunctional, budget: Budget) -> Result<BoundResult> {
    let game = Game::from_functional(f)?;
    let rows: Vec<usize> = (0..game.inputs_a).collect();
    let mut out = restricted_on_game(&game, &rows, budget)?;
    out.denominator = f.denominator();
    Ok(out)
}

/// Local bound with Alice's inputs restricted to `subset`; Bob keeps all inputs.
///
/// The certificate is a strategy on the full scenario whose value summed over the
/// kept inputs equals the bound (outputs on dropped inputs are 0).
pub fn restricted_local_bound(f: &BellFunctional, subset: &[usize]) -> Result<BoundResult> {
    restricted_local_bound_with(f, subset, Budget::unlimited())
}

pub fn restricted_local_bound_with(f: &BellFunctional, subset: &[usize], budget: Budget) -> Result<BoundResult> {
    let game = Game::from_functional(f)?;
    check_subset(subset, game.inputs_a)?;
    let mut out = restricted_on_game(&game, subset, budget)?;
    out.denominator = f.denominator();
    Ok(out)
}

fn check_subset(subset: &[usize], inputs: usize) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::InvalidArgument("restricted input set is empty".into()));
    }
    let mut seen = vec![false; inputs];
    for &x in subset {
        if x >= inputs || std::mem::replace(&mut seen[x], true) {
            return Err(Error::InvalidArgument(format!("input {x} is out of range or repeated")));
        }
    }
    Ok(())
}

fn restricted_on_game(game: &Game, rows: &[usize], budget: Budget) -> Result<BoundResult> {
    let meter = Meter::new(budget);
    let seed = heuristics::quick_local(game, rows);
    let floor = seed.value - 1;
    let out = local::search(game, rows, floor, Some(seed), &meter);
    let found = out.found.expect("seed beats its own floor");
    let method = if rows.len() == game.inputs_a { "branch-and-bound" } else { "branch-and-bound restricted" };
    Ok(BoundResult::new(found.value, 1, kind(out.complete), method)
        .with_certificate(Certificate::Strategy(DeterministicStrategy::new(found.alice, found.bob)))
        .with_stats(meter.elapsed(), meter.nodes()))
}

/// Exact one-bit bound in one direction: the best bipartition of the sender's inputs.
pub fn onebit_bound(f: &BellFunctional, direction: Direction, budget: Budget) -> Result<BoundResult> {
    let mut out = cbit_bound(f, 1, direction, budget)?;
    out.method = format!("bipartition enumeration {}", direction.label());
    Ok(out)
}

/// Larger of the two directional one-bit bounds.
pub fn bidirectional_onebit_bound(f: &BellFunctional, budget: Budget) -> Result<BoundResult> {
    let forward = onebit_bound(f, Direction::AliceToBob, budget)?;
    if f.is_party_symmetric() {
        let mut out = forward;
        out.method = format!("{} (party-symmetric)", out.method);
        return Ok(out);
    }
    let backward = onebit_bound(f, Direction::BobToAlice, budget)?;
    let both_exact = forward.is_exact() && backward.is_exact();
    let (elapsed, nodes) = (forward.elapsed + backward.elapsed, forward.nodes + backward.nodes);
    let mut out = if backward.value > forward.value { backward } else { forward };
    out.kind = kind(both_exact);
    out.elapsed = elapsed;
    out.nodes = nodes;
    Ok(out)
}

/// Exact one-way c-bit bound: best partition of the sender's inputs into at most `2^c` blocks.
pub fn cbit_bound(f: &BellFunctional, bits: u32, direction: Direction, budget: Budget) -> Result<BoundResult> {
    let start = Instant::now();
    let game = Game::from_functional(f)?;
    let game = match direction {
        Direction::AliceToBob => game,
        Direction::BobToAlice => game.transposed(),
    };
    if game.inputs_a > 64 {
        return Err(Error::TooLarge(format!("{} sender inputs exceed the 64-input partition limit", game.inputs_a)));
    }
    let max_blocks = if bits >= 32 { usize::MAX } else { 1usize << bits }.min(game.inputs_a);
    let meter = Meter::new(budget);
    let mut search = PartitionSearch::new(&game, &meter, max_blocks);

    if max_blocks >= 2 {
        let cfg = SearchConfig::new(0x0b17, 32);
        let (_, _, state) = heuristics::onebit_on_game(&game, &cfg);
        let protocol = state.clone().into_protocol(Direction::AliceToBob);
        let blocks = protocol
            .blocks
            .iter()
            .zip(&protocol.responders)
            .map(|(block, responder)| {
                let value = game.value_on(block, &protocol.sender, responder);
                (block.clone(), Found { value, alice: protocol.sender.clone(), bob: responder.clone() })
            })
            .collect();
        search.seed_incumbent(state.value, blocks);
    }
    let complete = search.run();

    let mut sender = vec![0; game.inputs_a];
    let mut blocks = Vec::new();
    let mut responders = Vec::new();
    for (block, found) in &search.best_blocks {
        for &x in block {
            sender[x] = found.alice[x];
        }
        blocks.push(block.clone());
        responders.push(found.bob.clone());
    }
    let protocol = MessageProtocol { direction, blocks, sender, responders };
    let method = format!("partition enumeration c={bits} {}", direction.label());
    Ok(BoundResult::new(search.best, f.denominator(), kind(complete), method)
        .with_certificate(Certificate::Protocol(protocol))
        .with_stats(start.elapsed(), meter.nodes()))
}

use serde::{Deserialize, Serialize};

use super::functional::BellFunctional;
use super::scenario::Scenario;
use crate::error::{Error, Result};

/// Per-party output maps; the extreme points of the local set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeterministicStrategy {
    pub alice: Vec<usize>,
    pub bob: Vec<usize>,
}

impl DeterministicStrategy {
    pub fn new(alice: Vec<usize>, bob: Vec<usize>) -> Self {
        Self { alice, bob }
    }

    pub fn validate(&self, scenario: Scenario) -> Result<()> {
        check_map("Alice", &self.alice, scenario.inputs_a, scenario.outputs_a)?;
        check_map("Bob", &self.bob, scenario.inputs_b, scenario.outputs_b)
    }

    pub fn swapped(&self) -> Self {
        Self { alice: self.bob.clone(), bob: self.alice.clone() }
    }
}

fn check_map(party: &str, map: &[usize], inputs: usize, outputs: usize) -> Result<()> {
    if map.len() != inputs {
        return Err(Error::InvalidArgument(format!(
            "{party}'s map covers {} inputs, scenario has {inputs}",
            map.len()
        )));
    }
    if let Some(&o) = map.iter().find(|&&o| o >= outputs) {
        return Err(Error::InvalidArgument(format!("{party}'s output {o} out of range (0..{outputs})")));
    }
    Ok(())
}

/// Who sends the message in a one-way communication model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "a_to_b")]
    AliceToBob,
    #[serde(rename = "b_to_a")]
    BobToAlice,
}

impl Direction {
    pub fn label(self) -> &'static str {
        match self {
            Direction::AliceToBob => "A->B",
            Direction::BobToAlice => "B->A",
        }
    }
}

/// Deterministic one-way protocol: the sender's inputs are grouped into blocks, the
/// block index is the message, and the responder answers with one map per message.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MessageProtocol {
    pub direction: Direction,
    /// Disjoint nonempty blocks covering the sender's inputs.
    pub blocks: Vec<Vec<usize>>,
    pub sender: Vec<usize>,
    /// `responders[k][y]` is the responder's output for input `y` after message `k`.
    pub responders: Vec<Vec<usize>>,
}

impl MessageProtocol {
    /// Checks the protocol's shape against a functional's scenario and a bit budget.
    pub fn validate(&self, scenario: Scenario, bits: u32) -> Result<()> {
        let s = match self.direction {
            Direction::AliceToBob => scenario,
            Direction::BobToAlice => scenario.swapped(),
        };
        if self.blocks.len() as u128 > 1u128 << bits.min(127) {
            return Err(Error::InvalidArgument(format!("{} blocks exceed a {bits}-bit budget", self.blocks.len())));
        }
        if self.blocks.len() != self.responders.len() {
            return Err(Error::InvalidArgument("one responder map is needed per block".into()));
        }
        let mut seen = vec![false; s.inputs_a];
        for block in &self.blocks {
            if block.is_empty() {
                return Err(Error::InvalidArgument("empty message block".into()));
            }
            for &x in block {
                if x >= s.inputs_a || std::mem::replace(&mut seen[x], true) {
                    return Err(Error::InvalidArgument(format!("sender input {x} is out of range or repeated")));
                }
            }
        }
        if seen.iter().any(|&v| !v) {
            return Err(Error::InvalidArgument("message blocks do not cover the sender's inputs".into()));
        }
        check_map("sender", &self.sender, s.inputs_a, s.outputs_a)?;
        for r in &self.responders {
            check_map("responder", r, s.inputs_b, s.outputs_b)?;
        }
        Ok(())
    }

    /// Value of the protocol on `functional`, internal integer scale.
    pub fn evaluate(&self, functional: &BellFunctional) -> Result<i64> {
        self.validate(functional.scenario(), usize::BITS - (self.blocks.len().max(1) - 1).leading_zeros())?;
        let mut total = 0;
        for (block, responder) in self.blocks.iter().zip(&self.responders) {
            for &x in block {
                for (y, &b) in responder.iter().enumerate() {
                    total += match self.direction {
                        Direction::AliceToBob => functional.coefficient(self.sender[x], b, x, y),
                        Direction::BobToAlice => functional.coefficient(b, self.sender[x], y, x),
                    };
                }
            }
        }
        Ok(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::builders::chsh;

    #[test]
    fn rejects_out_of_range_outputs() {
        let s = Scenario::new(2, 2, 2, 2).unwrap();
        assert!(DeterministicStrategy::new(vec![0, 2], vec![0, 0]).validate(s).is_err());
        assert!(DeterministicStrategy::new(vec![0], vec![0, 0]).validate(s).is_err());
    }

    #[test]
    fn chsh_protocol_sending_input_wins_always() {
        // Alice outputs 1 and sends l = x; Bob outputs 1 except b = 1 - l on y = 1.
        let p = MessageProtocol {
            direction: Direction::AliceToBob,
            blocks: vec![vec![0], vec![1]],
            sender: vec![1, 1],
            responders: vec![vec![1, 1], vec![1, 0]],
        };
        assert_eq!(p.evaluate(&chsh()).unwrap(), 4);
        let q = MessageProtocol { direction: Direction::BobToAlice, ..p };
        assert_eq!(q.evaluate(&chsh()).unwrap(), 4);
    }

    #[test]
    fn protocol_validation() {
        let s = Scenario::new(3, 2, 2, 2).unwrap();
        let mut p = MessageProtocol {
            direction: Direction::AliceToBob,
            blocks: vec![vec![0, 2], vec![1]],
            sender: vec![0, 0, 0],
            responders: vec![vec![0, 0], vec![1, 1]],
        };
        assert!(p.validate(s, 1).is_ok());
        p.blocks = vec![vec![0], vec![1], vec![2]];
        p.responders.push(vec![0, 0]);
        assert!(p.validate(s, 1).is_err());
        assert!(p.validate(s, 2).is_ok());
        p.blocks = vec![vec![0], vec![1], vec![1]];
        assert!(p.validate(s, 2).is_err());
    }
}

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Input and output cardinalities of a bipartite Bell scenario.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scenario {
    pub inputs_a: usize,
    pub inputs_b: usize,
    pub outputs_a: usize,
    pub outputs_b: usize,
}

impl Scenario {
    pub fn new(inputs_a: usize, inputs_b: usize, outputs_a: usize, outputs_b: usize) -> Result<Self> {
        if inputs_a == 0 || inputs_b == 0 || outputs_a == 0 || outputs_b == 0 {
            return Err(Error::InvalidScenario(format!(
                "all cardinalities must be at least 1, got ({inputs_a},{inputs_b},{outputs_a},{outputs_b})"
            )));
        }
        Ok(Self { inputs_a, inputs_b, outputs_a, outputs_b })
    }

    /// Number of entries of the full conditional probability table, m_A·m_B·o_A·o_B.
    pub fn probability_dimension(&self) -> u128 {
        self.inputs_a as u128 * self.inputs_b as u128 * self.outputs_a as u128 * self.outputs_b as u128
    }

    /// Componentwise product, the scenario of two games played in parallel.
    pub fn tensor(&self, other: &Scenario) -> Scenario {
        Scenario {
            inputs_a: self.inputs_a * other.inputs_a,
            inputs_b: self.inputs_b * other.inputs_b,
            outputs_a: self.outputs_a * other.outputs_a,
            outputs_b: self.outputs_b * other.outputs_b,
        }
    }

    /// The same scenario with the roles of Alice and Bob exchanged.
    pub fn swapped(&self) -> Scenario {
        Scenario {
            inputs_a: self.inputs_b,
            inputs_b: self.inputs_a,
            outputs_a: self.outputs_b,
            outputs_b: self.outputs_a,
        }
    }

    /// Length of a dense table, if it fits in memory addressing.
    pub fn dense_len(&self) -> Option<usize> {
        usize::try_from(self.probability_dimension()).ok()
    }

    /// Dense-table position of `P(ab|xy)`.
    #[inline]
    pub fn index(&self, a: usize, b: usize, x: usize, y: usize) -> usize {
        ((x * self.inputs_b + y) * self.outputs_a + a) * self.outputs_b + b
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.inputs_a, self.inputs_b, self.outputs_a, self.outputs_b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_zero_cardinality() {
        assert!(Scenario::new(0, 2, 2, 2).is_err());
        assert!(Scenario::new(2, 2, 2, 0).is_err());
    }

    #[test]
    fn probability_dimension_is_product() {
        let s = Scenario::new(7, 7, 16, 16).unwrap();
        assert_eq!(s.probability_dimension(), 12544);
        let s = Scenario::new(63, 63, 2, 2).unwrap();
        assert_eq!(s.probability_dimension(), 15876);
    }

    #[test]
    fn tensor_squares_cardinalities() {
        let chsh = Scenario::new(2, 2, 2, 2).unwrap();
        assert_eq!(chsh.tensor(&chsh), Scenario::new(4, 4, 4, 4).unwrap());
    }
}

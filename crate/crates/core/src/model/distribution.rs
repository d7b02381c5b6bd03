use serde::{Deserialize, Serialize};

use super::scenario::Scenario;
use super::strategy::DeterministicStrategy;
use crate::error::{Error, Result};

/// Tolerance for normalization and no-signalling checks.
pub const DISTRIBUTION_TOL: f64 = 1e-9;

/// Conditional probability table `P(ab|xy)`, same layout as dense functionals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    scenario: Scenario,
    probs: Vec<f64>,
}

/// Which copy of a two-copy distribution survives coarse-graining.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Copy {
    First,
    Second,
}

impl Distribution {
    /// Wraps a probability table after checking shape, range and normalization.
    pub fn new(scenario: Scenario, probs: Vec<f64>) -> Result<Self> {
        let d = Self::unchecked(scenario, probs)?;
        if let Some(p) = d.probs.iter().find(|p| !(-DISTRIBUTION_TOL..=1.0 + DISTRIBUTION_TOL).contains(*p)) {
            return Err(Error::InvalidDistribution(format!("probability {p} outside [0, 1]")));
        }
        d.check_normalization(DISTRIBUTION_TOL)?;
        Ok(d)
    }

    pub(crate) fn unchecked(scenario: Scenario, probs: Vec<f64>) -> Result<Self> {
        let len =
            scenario.dense_len().ok_or_else(|| Error::TooLarge(format!("distribution for scenario {scenario}")))?;
        if probs.len() != len {
            return Err(Error::InvalidDistribution(format!("expected {len} entries, got {}", probs.len())));
        }
        Ok(Self { scenario, probs })
    }

    pub fn uniform(scenario: Scenario) -> Self {
        let len = scenario.dense_len().expect("uniform distribution size");
        let p = 1.0 / (scenario.outputs_a * scenario.outputs_b) as f64;
        Self { scenario, probs: vec![p; len] }
    }

    /// Point distribution of a deterministic strategy.
    pub fn deterministic(scenario: Scenario, strategy: &DeterministicStrategy) -> Result<Self> {
        strategy.validate(scenario)?;
        let mut probs = vec![0.0; scenario.dense_len().expect("distribution size")];
        for x in 0..scenario.inputs_a {
            for y in 0..scenario.inputs_b {
                probs[scenario.index(strategy.alice[x], strategy.bob[y], x, y)] = 1.0;
            }
        }
        Ok(Self { scenario, probs })
    }

    pub fn scenario(&self) -> Scenario {
        self.scenario
    }

    pub fn prob(&self, a: usize, b: usize, x: usize, y: usize) -> f64 {
        self.probs[self.scenario.index(a, b, x, y)]
    }

    pub fn block(&self, x: usize, y: usize) -> &[f64] {
        let start = self.scenario.index(0, 0, x, y);
        &self.probs[start..start + self.scenario.outputs_a * self.scenario.outputs_b]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    pub fn check_normalization(&self, tol: f64) -> Result<()> {
        let s = self.scenario;
        for x in 0..s.inputs_a {
            for y in 0..s.inputs_b {
                let total: f64 = self.block(x, y).iter().sum();
                if (total - 1.0).abs() > tol {
                    return Err(Error::InvalidDistribution(format!("P(·|{x}{y}) sums to {total}")));
                }
            }
        }
        Ok(())
    }

    /// Alice's marginal must not depend on `y`, Bob's must not depend on `x`.
    pub fn check_no_signalling(&self, tol: f64) -> Result<()> {
        let s = self.scenario;
        for x in 0..s.inputs_a {
            for a in 0..s.outputs_a {
                let reference = self.marginal_a(a, x, 0);
                for y in 1..s.inputs_b {
                    let m = self.marginal_a(a, x, y);
                    if (m - reference).abs() > tol {
                        return Err(Error::InvalidDistribution(format!(
                            "Alice's marginal P(a={a}|x={x}) varies with y: {reference} vs {m}"
                        )));
                    }
                }
            }
        }
        for y in 0..s.inputs_b {
            for b in 0..s.outputs_b {
                let reference = self.marginal_b(b, 0, y);
                for x in 1..s.inputs_a {
                    let m = self.marginal_b(b, x, y);
                    if (m - reference).abs() > tol {
                        return Err(Error::InvalidDistribution(format!(
                            "Bob's marginal P(b={b}|y={y}) varies with x: {reference} vs {m}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn marginal_a(&self, a: usize, x: usize, y: usize) -> f64 {
        (0..self.scenario.outputs_b).map(|b| self.prob(a, b, x, y)).sum()
    }

    pub fn marginal_b(&self, b: usize, x: usize, y: usize) -> f64 {
        (0..self.scenario.outputs_a).map(|a| self.prob(a, b, x, y)).sum()
    }

    /// Joint table of two independent copies; the first copy is the major index.
    pub fn tensor(&self, other: &Distribution) -> Result<Distribution> {
        let s = self.scenario.tensor(&other.scenario);
        let len = s
            .dense_len()
            .filter(|&n| n <= crate::model::DENSE_LIMIT)
            .ok_or_else(|| Error::TooLarge(format!("product distribution for scenario {s}")))?;
        let (s1, s2) = (self.scenario, other.scenario);
        let mut probs = vec![0.0; len];
        for x in 0..s.inputs_a {
            for y in 0..s.inputs_b {
                let (x1, x2, y1, y2) = (x / s2.inputs_a, x % s2.inputs_a, y / s2.inputs_b, y % s2.inputs_b);
                for a1 in 0..s1.outputs_a {
                    for b1 in 0..s1.outputs_b {
                        let p1 = self.prob(a1, b1, x1, y1);
                        for a2 in 0..s2.outputs_a {
                            for b2 in 0..s2.outputs_b {
                                let a = a1 * s2.outputs_a + a2;
                                let b = b1 * s2.outputs_b + b2;
                                probs[s.index(a, b, x, y)] = p1 * other.prob(a2, b2, x2, y2);
                            }
                        }
                    }
                }
            }
        }
        Ok(Distribution { scenario: s, probs })
    }

    /// Convex combination `weight·self + (1 − weight)·other`.
    pub fn mix(&self, other: &Distribution, weight: f64) -> Result<Distribution> {
        if self.scenario != other.scenario {
            return Err(Error::ScenarioMismatch { expected: self.scenario, found: other.scenario });
        }
        if !(0.0..=1.0).contains(&weight) {
            return Err(Error::InvalidArgument(format!("mixture weight {weight} outside [0, 1]")));
        }
        let probs = self.probs.iter().zip(&other.probs).map(|(p, q)| weight * p + (1.0 - weight) * q).collect();
        Ok(Distribution { scenario: self.scenario, probs })
    }

    /// Marginalizes one copy of a two-copy table whose inputs on that copy are fixed to
    /// `(x_fixed, y_fixed)`: `P(ab|xy) = Σ_{a',b'} P(aa'bb'|xx'yy')` for `Copy::First`.
    pub fn coarse_grain(&self, single: Scenario, keep: Copy, x_fixed: usize, y_fixed: usize) -> Result<Distribution> {
        if self.scenario != single.tensor(&single) {
            return Err(Error::InvalidArgument(format!(
                "distribution on {} is not two copies of {single}",
                self.scenario
            )));
        }
        if x_fixed >= single.inputs_a || y_fixed >= single.inputs_b {
            return Err(Error::InvalidArgument(format!("fixed inputs ({x_fixed},{y_fixed}) outside {single}")));
        }
        let s = single;
        let mut probs = vec![0.0; s.dense_len().expect("single-copy size")];
        for x in 0..s.inputs_a {
            for y in 0..s.inputs_b {
                let (xx, yy) = match keep {
                    Copy::First => (x * s.inputs_a + x_fixed, y * s.inputs_b + y_fixed),
                    Copy::Second => (x_fixed * s.inputs_a + x, y_fixed * s.inputs_b + y),
                };
                for a in 0..s.outputs_a {
                    for b in 0..s.outputs_b {
                        let mut total = 0.0;
                        for a2 in 0..s.outputs_a {
                            for b2 in 0..s.outputs_b {
                                let (aa, bb) = match keep {
                                    Copy::First => (a * s.outputs_a + a2, b * s.outputs_b + b2),
                                    Copy::Second => (a2 * s.outputs_a + a, b2 * s.outputs_b + b),
                                };
                                total += self.prob(aa, bb, xx, yy);
                            }
                        }
                        probs[s.index(a, b, x, y)] = total;
                    }
                }
            }
        }
        Ok(Distribution { scenario: s, probs })
    }
}

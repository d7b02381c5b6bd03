use crate::error::{Error, Result};
use crate::model::{BellFunctional, DENSE_LIMIT};

/// Materialized coefficient table used by the exact and heuristic searches.
///
/// Layout matches dense functionals: `((x*m_B + y)*o_A + a)*o_B + b`.
#[derive(Clone, Debug)]
pub struct Game {
    pub inputs_a: usize,
    pub inputs_b: usize,
    pub outputs_a: usize,
    pub outputs_b: usize,
    table: Vec<i64>,
}

impl Game {
    pub fn from_functional(f: &BellFunctional) -> Result<Self> {
        let s = f.scenario();
        let len = usize::try_from(s.probability_dimension())
            .ok()
            .filter(|&n| n <= DENSE_LIMIT)
            .ok_or_else(|| Error::TooLarge(format!("search table for scenario {s}")))?;
        let mut table = Vec::with_capacity(len);
        for x in 0..s.inputs_a {
            for y in 0..s.inputs_b {
                table.extend(f.block(x, y));
            }
        }
        Ok(Self { inputs_a: s.inputs_a, inputs_b: s.inputs_b, outputs_a: s.outputs_a, outputs_b: s.outputs_b, table })
    }

    /// Alice and Bob exchanged.
    pub fn transposed(&self) -> Game {
        let mut table = vec![0; self.table.len()];
        for x in 0..self.inputs_a {
            for y in 0..self.inputs_b {
                for a in 0..self.outputs_a {
                    for b in 0..self.outputs_b {
                        table[((y * self.inputs_a + x) * self.outputs_b + b) * self.outputs_a + a] =
                            self.at(x, y, a, b);
                    }
                }
            }
        }
        Game {
            inputs_a: self.inputs_b,
            inputs_b: self.inputs_a,
            outputs_a: self.outputs_b,
            outputs_b: self.outputs_a,
            table,
        }
    }

    #[inline]
    pub fn at(&self, x: usize, y: usize, a: usize, b: usize) -> i64 {
        self.table[((x * self.inputs_b + y) * self.outputs_a + a) * self.outputs_b + b]
    }

    #[inline]
    pub fn block(&self, x: usize, y: usize) -> &[i64] {
        let start = (x * self.inputs_b + y) * self.outputs_a * self.outputs_b;
        &self.table[start..start + self.outputs_a * self.outputs_b]
    }

    /// Value of deterministic maps restricted to Alice inputs in `rows`.
    pub fn value_on(&self, rows: &[usize], alice: &[usize], bob: &[usize]) -> i64 {
        rows.iter().map(|&x| (0..self.inputs_b).map(|y| self.at(x, y, alice[x], bob[y])).sum::<i64>()).sum()
    }

    /// Bob's best response to Alice's outputs on `rows`; ties go to the lowest output.
    pub fn best_response_b(&self, rows: &[usize], alice: &[usize], bob: &mut [usize]) -> i64 {
        let mut total = 0;
        let mut scores = vec![0; self.outputs_b];
        for (y, slot) in bob.iter_mut().enumerate() {
            scores.iter_mut().for_each(|s| *s = 0);
            for &x in rows {
                let row = &self.block(x, y)[alice[x] * self.outputs_b..(alice[x] + 1) * self.outputs_b];
                scores.iter_mut().zip(row).for_each(|(s, &c)| *s += c);
            }
            let (best, value) = argmax(&scores);
            *slot = best;
            total += value;
        }
        total
    }

    /// Alice's best response on `rows` to Bob's outputs.
    pub fn best_response_a(&self, rows: &[usize], bob: &[usize], alice: &mut [usize]) -> i64 {
        let mut total = 0;
        let mut scores = vec![0; self.outputs_a];
        for &x in rows {
            scores.iter_mut().for_each(|s| *s = 0);
            for (y, &b) in bob.iter().enumerate() {
                let block = self.block(x, y);
                for (a, s) in scores.iter_mut().enumerate() {
                    *s += block[a * self.outputs_b + b];
                }
            }
            let (best, value) = argmax(&scores);
            alice[x] = best;
            total += value;
        }
        total
    }
}

/// Index and value of the maximum; the lowest index wins ties.
#[inline]
pub(crate) fn argmax(values: &[i64]) -> (usize, i64) {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    (best, values[best])
}

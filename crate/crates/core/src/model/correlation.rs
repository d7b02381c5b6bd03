use num_rational::Ratio;
use num_traits::{Signed, Zero};

use super::functional::BellFunctional;
use super::scenario::Scenario;
use crate::error::{Error, Result};
use crate::platonic::VectorConfiguration;

/// A correlation Bell expression `Σ M_xy E_xy` on ±1-valued outcomes.
///
/// Output 0 is read as +1 and output 1 as −1, so
/// `E_xy = P(00|xy) + P(11|xy) − P(01|xy) − P(10|xy)`.
#[derive(Clone, Debug)]
pub struct CorrelationFunctional {
    inputs: usize,
    matrix: Vec<Ratio<i64>>,
    factor: Option<VectorConfiguration>,
}

/// Nonnegative probability form of a correlation expression together with the exact
/// affine map back: `correlation = functional value − offset`.
#[derive(Clone, Debug)]
pub struct ProbabilityForm {
    pub functional: BellFunctional,
    pub offset: Ratio<i64>,
}

impl ProbabilityForm {
    /// Correlation value of an internal-scale functional value.
    pub fn correlation_value(&self, internal: i64) -> Ratio<i64> {
        self.functional.user_value(internal) - self.offset
    }
}

impl CorrelationFunctional {
    /// Square coefficient matrix, row-major.
    pub fn new(inputs: usize, matrix: Vec<Ratio<i64>>) -> Result<Self> {
        if inputs == 0 || matrix.len() != inputs * inputs {
            return Err(Error::InvalidArgument(format!(
                "correlation matrix needs {inputs}x{inputs} entries, got {}",
                matrix.len()
            )));
        }
        Ok(Self { inputs, matrix, factor: None })
    }

    pub fn from_integers(inputs: usize, matrix: &[i64]) -> Result<Self> {
        Self::new(inputs, matrix.iter().map(|&v| Ratio::from_integer(v)).collect())
    }

    /// Gram matrix `M_xy = V_x·V_y` of a unit-vector configuration, factor retained.
    pub fn from_factor(vectors: &VectorConfiguration) -> Self {
        let m = vectors.len();
        let mut matrix = vec![Ratio::zero(); m * m];
        for x in 0..m {
            for y in x..m {
                let v = vectors.dot(x, y);
                matrix[x * m + y] = v;
                matrix[y * m + x] = v;
            }
        }
        Self { inputs: m, matrix, factor: Some(vectors.clone()) }
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn entry(&self, x: usize, y: usize) -> Ratio<i64> {
        self.matrix[x * self.inputs + y]
    }

    pub fn factor(&self) -> Option<&VectorConfiguration> {
        self.factor.as_ref()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.inputs).all(|x| (0..x).all(|y| self.entry(x, y) == self.entry(y, x)))
    }

    pub fn trace(&self) -> Ratio<i64> {
        (0..self.inputs).map(|x| self.entry(x, x)).sum()
    }

    /// `Σ M_xy a_x b_y` for sign vectors (entries ±1).
    pub fn correlation_value(&self, alice: &[i8], bob: &[i8]) -> Result<Ratio<i64>> {
        if alice.len() != self.inputs || bob.len() != self.inputs {
            return Err(Error::InvalidArgument("sign vectors must cover every input".into()));
        }
        if alice.iter().chain(bob).any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidArgument("sign vectors take values ±1".into()));
        }
        let mut total = Ratio::zero();
        for (x, &a) in alice.iter().enumerate() {
            for (y, &b) in bob.iter().enumerate() {
                total += self.entry(x, y) * i64::from(a * b);
            }
        }
        Ok(total)
    }

    /// Exact local bound by enumerating Alice's signs with Bob's closed-form best
    /// response `Σ_y |Σ_x M_xy a_x|`. Guarded to at most 24 inputs.
    pub fn local_bound_exhaustive(&self) -> Result<(Ratio<i64>, Vec<i8>, Vec<i8>)> {
        let m = self.inputs;
        if m > 24 {
            return Err(Error::TooLarge(format!("exhaustive correlation bound over 2^{m} sign vectors")));
        }
        let mut best: Option<(Ratio<i64>, Vec<i8>, Vec<i8>)> = None;
        // Global sign flip leaves the value unchanged, so fix a_0 = +1.
        for mask in 0u32..(1 << (m - 1)) {
            let alice: Vec<i8> = (0..m).map(|x| if x > 0 && mask >> (x - 1) & 1 == 1 { -1 } else { 1 }).collect();
            let mut value = Ratio::zero();
            let mut bob = vec![1i8; m];
            for (y, b) in bob.iter_mut().enumerate() {
                let col: Ratio<i64> = (0..m).map(|x| self.entry(x, y) * i64::from(alice[x])).sum();
                if col.is_negative() {
                    *b = -1;
                }
                value += col.abs();
            }
            if best.as_ref().is_none_or(|(v, _, _)| value > *v) {
                best = Some((value, alice, bob));
            }
        }
        Ok(best.expect("at least one sign vector"))
    }

    /// Shifted nonnegative form: `S_abxy = M_xy(−1)^{a⊕b} + |M_xy|`, offset `Σ|M_xy|`.
    pub fn to_probability(&self) -> Result<ProbabilityForm> {
        let m = self.inputs;
        let denominator = self.matrix.iter().fold(1i64, |acc, r| lcm(acc, *r.denom()));
        let scenario = Scenario::new(m, m, 2, 2)?;
        let functional = BellFunctional::from_fn(scenario, denominator, |a, b, x, y| {
            let v = self.entry(x, y);
            let s = if a == b { v + v.abs() } else { v.abs() - v };
            (s * denominator).to_integer()
        })?;
        let offset = self.matrix.iter().map(|v| v.abs()).sum();
        Ok(ProbabilityForm { functional, offset })
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: i64, b: i64) -> i64 {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::strategy::DeterministicStrategy;

    fn to_outputs(signs: &[i8]) -> Vec<usize> {
        signs.iter().map(|&s| usize::from(s < 0)).collect()
    }

    #[test]
    fn single_entry_bound_is_one() {
        let c = CorrelationFunctional::from_integers(1, &[1]).unwrap();
        assert_eq!(c.local_bound_exhaustive().unwrap().0, Ratio::from_integer(1));
    }

    #[test]
    fn probability_form_matches_correlation_value() {
        let c =
            CorrelationFunctional::new(3, [1, -1, 2, 0, 3, -2, 1, 1, -1].iter().map(|&v| Ratio::new(v, 2)).collect())
                .unwrap();
        let form = c.to_probability().unwrap();
        assert!(form.functional.block(0, 0).iter().all(|&v| v >= 0));
        for mask in 0..64u32 {
            let a: Vec<i8> = (0..3).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
            let b: Vec<i8> = (0..3).map(|i| if mask >> (i + 3) & 1 == 1 { -1 } else { 1 }).collect();
            let st = DeterministicStrategy::new(to_outputs(&a), to_outputs(&b));
            let internal = form.functional.evaluate_strategy(&st).unwrap();
            assert_eq!(form.correlation_value(internal), c.correlation_value(&a, &b).unwrap());
        }
    }

    #[test]
    fn rejects_non_square_matrix() {
        assert!(CorrelationFunctional::from_integers(2, &[1, 2, 3]).is_err());
        let c = CorrelationFunctional::from_integers(2, &[1, 2, 2, 1]).unwrap();
        assert!(c.correlation_value(&[1, 0], &[1, 1]).is_err());
        assert!(c.is_symmetric());
    }
}

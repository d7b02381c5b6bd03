use std::sync::Arc;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::distribution::Distribution;
use super::scenario::Scenario;
use super::strategy::DeterministicStrategy;
use crate::error::{Error, Result};

/// Largest dense coefficient table (entries) any operation will materialize.
pub const DENSE_LIMIT: usize = 1 << 28;

/// Current version of the JSON document produced by [`BellFunctional::to_json`].
pub const FUNCTIONAL_DOC_VERSION: u32 = 1;

/// How a functional's coefficients are stored.
/// Kept input lists `(Alice, Bob)` of a truncation.
pub type KeptInputs = (Vec<usize>, Vec<usize>);

#[derive(Clone, Debug)]
pub enum Repr {
    /// Full table, laid out as `((x*m_B + y)*o_A + a)*o_B + b`.
    Dense(Arc<[i64]>),
    /// Coefficients are products of the two children's coefficients.
    Product(Arc<BellFunctional>, Arc<BellFunctional>),
    /// The parent restricted to the listed inputs, in list order.
    Truncated { parent: Arc<BellFunctional>, keep_x: Vec<usize>, keep_y: Vec<usize> },
}

/// A Bell functional `Σ S_abxy P(ab|xy)` with nonnegative exact rational coefficients.
///
/// Coefficients are held as integers over a common positive denominator so every
/// classical value is an exact integer internally. `user value = internal / denominator`.
#[derive(Clone, Debug)]
pub struct BellFunctional {
    scenario: Scenario,
    repr: Repr,
    denominator: i64,
    name: Option<String>,
}

impl BellFunctional {
    pub fn from_dense(scenario: Scenario, coefficients: Vec<i64>, denominator: i64) -> Result<Self> {
        let len = scenario
            .dense_len()
            .filter(|&n| n <= DENSE_LIMIT)
            .ok_or_else(|| Error::TooLarge(format!("dense table for scenario {scenario}")))?;
        if coefficients.len() != len {
            return Err(Error::InvalidArgument(format!(
                "expected {len} coefficients for scenario {scenario}, got {}",
                coefficients.len()
            )));
        }
        if denominator <= 0 {
            return Err(Error::InvalidArgument(format!("denominator must be positive, got {denominator}")));
        }
        if let Some(c) = coefficients.iter().find(|&&c| c < 0) {
            return Err(Error::InvalidArgument(format!("coefficients must be nonnegative, got {c}")));
        }
        Ok(Self { scenario, repr: Repr::Dense(coefficients.into()), denominator, name: None })
    }

    /// Dense functional from a coefficient function `f(a, b, x, y)`.
    pub fn from_fn(
        scenario: Scenario,
        denominator: i64,
        f: impl Fn(usize, usize, usize, usize) -> i64,
    ) -> Result<Self> {
        let len = scenario
            .dense_len()
            .filter(|&n| n <= DENSE_LIMIT)
            .ok_or_else(|| Error::TooLarge(format!("dense table for scenario {scenario}")))?;
        let mut coefficients = vec![0; len];
        for x in 0..scenario.inputs_a {
            for y in 0..scenario.inputs_b {
                for a in 0..scenario.outputs_a {
                    for b in 0..scenario.outputs_b {
                        coefficients[scenario.index(a, b, x, y)] = f(a, b, x, y);
                    }
                }
            }
        }
        Self::from_dense(scenario, coefficients, denominator)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn scenario(&self) -> Scenario {
        self.scenario
    }

    pub fn repr(&self) -> &Repr {
        &self.repr
    }

    pub fn denominator(&self) -> i64 {
        self.denominator
    }

    /// Converts an internal integer value to the user-scale rational.
    pub fn user_value(&self, internal: i64) -> Ratio<i64> {
        Ratio::new(internal, self.denominator)
    }

    /// Internal (integer-scaled) coefficient.
    pub fn coefficient(&self, a: usize, b: usize, x: usize, y: usize) -> i64 {
        match &self.repr {
            Repr::Dense(c) => c[self.scenario.index(a, b, x, y)],
            Repr::Product(first, second) => {
                let s2 = second.scenario;
                let v1 = first.coefficient(a / s2.outputs_a, b / s2.outputs_b, x / s2.inputs_a, y / s2.inputs_b);
                if v1 == 0 {
                    return 0;
                }
                v1 * second.coefficient(a % s2.outputs_a, b % s2.outputs_b, x % s2.inputs_a, y % s2.inputs_b)
            }
            Repr::Truncated { parent, keep_x, keep_y } => parent.coefficient(a, b, keep_x[x], keep_y[y]),
        }
    }

    pub fn coefficient_ratio(&self, a: usize, b: usize, x: usize, y: usize) -> Ratio<i64> {
        self.user_value(self.coefficient(a, b, x, y))
    }

    /// The `o_A × o_B` coefficient block of an input pair, row-major in `a`.
    pub fn block(&self, x: usize, y: usize) -> Vec<i64> {
        let s = self.scenario;
        match &self.repr {
            Repr::Dense(c) => {
                let start = s.index(0, 0, x, y);
                c[start..start + s.outputs_a * s.outputs_b].to_vec()
            }
            Repr::Product(first, second) => {
                let s2 = second.scenario;
                let b1 = first.block(x / s2.inputs_a, y / s2.inputs_b);
                let b2 = second.block(x % s2.inputs_a, y % s2.inputs_b);
                let (o1b, o2a, o2b) = (first.scenario.outputs_b, s2.outputs_a, s2.outputs_b);
                let mut out = vec![0; s.outputs_a * s.outputs_b];
                for a in 0..s.outputs_a {
                    for b in 0..s.outputs_b {
                        out[a * s.outputs_b + b] = b1[(a / o2a) * o1b + b / o2b] * b2[(a % o2a) * o2b + b % o2b];
                    }
                }
                out
            }
            Repr::Truncated { parent, keep_x, keep_y } => parent.block(keep_x[x], keep_y[y]),
        }
    }

    /// Largest coefficient of an input pair, computed without building the block.
    pub fn max_coefficient(&self, x: usize, y: usize) -> i64 {
        match &self.repr {
            Repr::Dense(_) => self.block(x, y).into_iter().max().unwrap_or(0),
            Repr::Product(first, second) => {
                let s2 = second.scenario;
                first.max_coefficient(x / s2.inputs_a, y / s2.inputs_b)
                    * second.max_coefficient(x % s2.inputs_a, y % s2.inputs_b)
            }
            Repr::Truncated { parent, keep_x, keep_y } => parent.max_coefficient(keep_x[x], keep_y[y]),
        }
    }

    /// Σ_{x,y} max_{a,b} S_abxy, internal scale.
    pub fn algebraic_bound(&self) -> i64 {
        let s = self.scenario;
        (0..s.inputs_a)
            .flat_map(|x| (0..s.inputs_b).map(move |y| (x, y)))
            .map(|(x, y)| self.max_coefficient(x, y))
            .sum()
    }

    /// Sum of all coefficients, internal scale.
    pub fn total_weight(&self) -> i64 {
        match &self.repr {
            Repr::Dense(c) => c.iter().sum(),
            Repr::Product(first, second) => first.total_weight() * second.total_weight(),
            Repr::Truncated { .. } => {
                let s = self.scenario;
                let mut total = 0;
                for x in 0..s.inputs_a {
                    for y in 0..s.inputs_b {
                        total += self.block(x, y).iter().sum::<i64>();
                    }
                }
                total
            }
        }
    }

    /// Product functional; scenario is the componentwise product and the first factor
    /// is the major index of every input and output.
    pub fn tensor(&self, other: &BellFunctional) -> BellFunctional {
        let name = match (&self.name, &other.name) {
            (Some(a), Some(b)) => Some(format!("{a}*{b}")),
            _ => None,
        };
        BellFunctional {
            scenario: self.scenario.tensor(&other.scenario),
            repr: Repr::Product(Arc::new(self.clone()), Arc::new(other.clone())),
            denominator: self.denominator * other.denominator,
            name,
        }
    }

    /// `n`-fold parallel repetition. `n = 1` returns a copy of `self`.
    pub fn tensor_power(&self, n: usize) -> Result<BellFunctional> {
        if n == 0 {
            return Err(Error::InvalidArgument("tensor power needs at least one copy".into()));
        }
        let mut out = self.clone();
        for _ in 1..n {
            out = out.tensor(self);
        }
        if let Some(name) = &self.name {
            if n > 1 {
                out.name = Some(format!("{name}^{n}"));
            }
        }
        Ok(out)
    }

    /// Restriction to the listed inputs; new input `i` is old input `keep_x[i]`.
    pub fn truncate(&self, keep_x: &[usize], keep_y: &[usize]) -> Result<BellFunctional> {
        let s = self.scenario;
        check_keep_list("Alice", keep_x, s.inputs_a)?;
        check_keep_list("Bob", keep_y, s.inputs_b)?;
        Ok(BellFunctional {
            scenario: Scenario { inputs_a: keep_x.len(), inputs_b: keep_y.len(), ..s },
            repr: Repr::Truncated { parent: Arc::new(self.clone()), keep_x: keep_x.to_vec(), keep_y: keep_y.to_vec() },
            denominator: self.denominator,
            name: self.name.as_ref().map(|n| format!("[{n}]")),
        })
    }

    /// Same functional with Alice and Bob exchanged.
    pub fn swapped(&self) -> BellFunctional {
        let s = self.scenario;
        let repr = match &self.repr {
            Repr::Dense(c) => {
                let t = s.swapped();
                let mut out = vec![0; c.len()];
                for x in 0..s.inputs_a {
                    for y in 0..s.inputs_b {
                        for a in 0..s.outputs_a {
                            for b in 0..s.outputs_b {
                                out[t.index(b, a, y, x)] = c[s.index(a, b, x, y)];
                            }
                        }
                    }
                }
                Repr::Dense(out.into())
            }
            Repr::Product(first, second) => Repr::Product(Arc::new(first.swapped()), Arc::new(second.swapped())),
            Repr::Truncated { parent, keep_x, keep_y } => {
                Repr::Truncated { parent: Arc::new(parent.swapped()), keep_x: keep_y.clone(), keep_y: keep_x.clone() }
            }
        };
        BellFunctional { scenario: s.swapped(), repr, denominator: self.denominator, name: self.name.clone() }
    }

    /// True when exchanging the parties leaves every coefficient unchanged.
    pub fn is_party_symmetric(&self) -> bool {
        let s = self.scenario;
        if s.inputs_a != s.inputs_b || s.outputs_a != s.outputs_b {
            return false;
        }
        (0..s.inputs_a).all(|x| {
            (0..s.inputs_b).all(|y| {
                let here = self.block(x, y);
                let there = self.block(y, x);
                (0..s.outputs_a)
                    .all(|a| (0..s.outputs_b).all(|b| here[a * s.outputs_b + b] == there[b * s.outputs_a + a]))
            })
        })
    }

    /// Materialized copy with a dense representation.
    pub fn to_dense(&self) -> Result<BellFunctional> {
        let s = self.scenario;
        let len = s
            .dense_len()
            .filter(|&n| n <= DENSE_LIMIT)
            .ok_or_else(|| Error::TooLarge(format!("dense table for scenario {s}")))?;
        let mut out = Vec::with_capacity(len);
        for x in 0..s.inputs_a {
            for y in 0..s.inputs_b {
                out.extend(self.block(x, y));
            }
        }
        Ok(BellFunctional {
            scenario: s,
            repr: Repr::Dense(out.into()),
            denominator: self.denominator,
            name: self.name.clone(),
        })
    }

    /// Display labels of Alice's inputs; product inputs are digit strings, first copy first.
    pub fn input_labels_a(&self) -> Vec<String> {
        self.labels(true)
    }

    pub fn input_labels_b(&self) -> Vec<String> {
        self.labels(false)
    }

    fn labels(&self, alice: bool) -> Vec<String> {
        let s = self.scenario;
        match &self.repr {
            Repr::Dense(_) => {
                let m = if alice { s.inputs_a } else { s.inputs_b };
                if m <= 10 {
                    (0..m).map(|i| i.to_string()).collect()
                } else {
                    (0..m).map(|i| format!("[{i}]")).collect()
                }
            }
            Repr::Product(first, second) => {
                let l1 = first.labels(alice);
                let l2 = second.labels(alice);
                l1.iter().flat_map(|a| l2.iter().map(move |b| format!("{a}{b}"))).collect()
            }
            Repr::Truncated { parent, keep_x, keep_y } => {
                let labels = parent.labels(alice);
                let keep = if alice { keep_x } else { keep_y };
                keep.iter().map(|&i| labels[i].clone()).collect()
            }
        }
    }

    /// Value `Σ S_abxy P(ab|xy)` at user scale.
    pub fn evaluate(&self, dist: &Distribution) -> Result<f64> {
        if dist.scenario() != self.scenario {
            return Err(Error::ScenarioMismatch { expected: self.scenario, found: dist.scenario() });
        }
        let s = self.scenario;
        let no = s.outputs_a * s.outputs_b;
        let mut total = 0.0;
        for x in 0..s.inputs_a {
            for y in 0..s.inputs_b {
                let block = self.block(x, y);
                let probs = dist.block(x, y);
                total += block.iter().zip(probs).take(no).map(|(&c, &p)| c as f64 * p).sum::<f64>();
            }
        }
        Ok(total / self.denominator as f64)
    }

    /// Value on a product distribution `P₁ ⊗ … ⊗ P_n` given per copy, without
    /// materializing the joint table: per-copy term matrices `t_i[x][y] = Σ S P_i`
    /// multiply along each kept input tuple.
    pub fn evaluate_product(&self, copies: &[Distribution]) -> Result<f64> {
        let (leaves, keep) = self
            .product_factors()
            .ok_or_else(|| Error::InvalidArgument("functional is not a (truncated) product of dense factors".into()))?;
        if leaves.len() != copies.len() {
            return Err(Error::InvalidArgument(format!("{} factors but {} distributions", leaves.len(), copies.len())));
        }
        let terms = leaves.iter().zip(copies).map(|(leaf, dist)| leaf.term_matrix(dist)).collect::<Result<Vec<_>>>()?;
        let inputs_a: Vec<usize> = leaves.iter().map(|l| l.scenario.inputs_a).collect();
        let inputs_b: Vec<usize> = leaves.iter().map(|l| l.scenario.inputs_b).collect();
        let total_a: usize = inputs_a.iter().product();
        let total_b: usize = inputs_b.iter().product();
        let (keep_x, keep_y) = keep.unwrap_or_else(|| ((0..total_a).collect(), (0..total_b).collect()));
        let digits = |mut v: usize, radix: &[usize]| {
            let mut out = vec![0; radix.len()];
            for (slot, &r) in out.iter_mut().zip(radix).rev() {
                *slot = v % r;
                v /= r;
            }
            out
        };
        let xs: Vec<Vec<usize>> = keep_x.iter().map(|&x| digits(x, &inputs_a)).collect();
        let ys: Vec<Vec<usize>> = keep_y.iter().map(|&y| digits(y, &inputs_b)).collect();
        let mut total = 0.0;
        for x in &xs {
            for y in &ys {
                total += terms.iter().enumerate().map(|(i, t)| t[x[i] * inputs_b[i] + y[i]]).product::<f64>();
            }
        }
        Ok(total)
    }

    /// Per-input-pair values `t[x·m_B + y] = Σ_ab S_abxy P(ab|xy)` at user scale.
    pub fn term_matrix(&self, dist: &Distribution) -> Result<Vec<f64>> {
        if dist.scenario() != self.scenario {
            return Err(Error::ScenarioMismatch { expected: self.scenario, found: dist.scenario() });
        }
        let s = self.scenario;
        let scale = self.denominator as f64;
        Ok((0..s.inputs_a)
            .flat_map(|x| (0..s.inputs_b).map(move |y| (x, y)))
            .map(|(x, y)| {
                self.block(x, y).iter().zip(dist.block(x, y)).map(|(&c, &p)| c as f64 * p).sum::<f64>() / scale
            })
            .collect())
    }

    /// Value of a deterministic strategy, internal integer scale.
    pub fn evaluate_strategy(&self, strategy: &DeterministicStrategy) -> Result<i64> {
        strategy.validate(self.scenario)?;
        let s = self.scenario;
        let mut total = 0;
        for x in 0..s.inputs_a {
            for y in 0..s.inputs_b {
                total += self.coefficient(strategy.alice[x], strategy.bob[y], x, y);
            }
        }
        Ok(total)
    }

    /// Flattens a (possibly truncated) product tree into its leaf factors.
    ///
    /// Returns `None` if the tree contains truncations below the top level.
    pub fn product_factors(&self) -> Option<(Vec<BellFunctional>, Option<KeptInputs>)> {
        fn leaves(f: &BellFunctional, out: &mut Vec<BellFunctional>) -> bool {
            match &f.repr {
                Repr::Dense(_) => {
                    out.push(f.clone());
                    true
                }
                Repr::Product(a, b) => leaves(a, out) && leaves(b, out),
                Repr::Truncated { .. } => false,
            }
        }
        let mut out = Vec::new();
        match &self.repr {
            Repr::Truncated { parent, keep_x, keep_y } => {
                leaves(parent, &mut out).then(|| (out, Some((keep_x.clone(), keep_y.clone()))))
            }
            _ => leaves(self, &mut out).then_some((out, None)),
        }
    }
}

fn check_keep_list(party: &str, keep: &[usize], inputs: usize) -> Result<()> {
    if keep.is_empty() {
        return Err(Error::InvalidArgument(format!("{party}'s kept input list is empty")));
    }
    if let Some(&bad) = keep.iter().find(|&&i| i >= inputs) {
        return Err(Error::InvalidArgument(format!("{party}'s kept input {bad} is out of range (0..{inputs})")));
    }
    let mut sorted = keep.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidArgument(format!("{party}'s kept input list has duplicates")));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// JSON document

#[derive(Serialize, Deserialize)]
struct FunctionalDoc {
    version: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    name: Option<String>,
    scenario: Scenario,
    root: NodeDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum NodeDoc {
    Dense {
        scenario: Scenario,
        denominator: i64,
        /// Sparse `[a, b, x, y, numerator]` triplets; absent entries are zero.
        entries: Vec<[i64; 5]>,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        name: Option<String>,
    },
    Product {
        first: Box<NodeDoc>,
        second: Box<NodeDoc>,
    },
    Truncated {
        parent: Box<NodeDoc>,
        keep_x: Vec<usize>,
        keep_y: Vec<usize>,
    },
}

impl NodeDoc {
    fn from_functional(f: &BellFunctional) -> NodeDoc {
        match &f.repr {
            Repr::Dense(c) => {
                let s = f.scenario;
                let mut entries = Vec::new();
                for x in 0..s.inputs_a {
                    for y in 0..s.inputs_b {
                        for a in 0..s.outputs_a {
                            for b in 0..s.outputs_b {
                                let v = c[s.index(a, b, x, y)];
                                if v != 0 {
                                    entries.push([a as i64, b as i64, x as i64, y as i64, v]);
                                }
                            }
                        }
                    }
                }
                NodeDoc::Dense { scenario: s, denominator: f.denominator, entries, name: f.name.clone() }
            }
            Repr::Product(a, b) => NodeDoc::Product {
                first: Box::new(NodeDoc::from_functional(a)),
                second: Box::new(NodeDoc::from_functional(b)),
            },
            Repr::Truncated { parent, keep_x, keep_y } => NodeDoc::Truncated {
                parent: Box::new(NodeDoc::from_functional(parent)),
                keep_x: keep_x.clone(),
                keep_y: keep_y.clone(),
            },
        }
    }

    fn into_functional(self) -> Result<BellFunctional> {
        match self {
            NodeDoc::Dense { scenario, denominator, entries, name } => {
                let scenario =
                    Scenario::new(scenario.inputs_a, scenario.inputs_b, scenario.outputs_a, scenario.outputs_b)?;
                let len = scenario
                    .dense_len()
                    .filter(|&n| n <= DENSE_LIMIT)
                    .ok_or_else(|| Error::TooLarge(format!("dense table for scenario {scenario}")))?;
                let mut c = vec![0; len];
                for [a, b, x, y, v] in entries {
                    let in_range = |v: i64, n: usize| v >= 0 && (v as usize) < n;
                    if !(in_range(a, scenario.outputs_a)
                        && in_range(b, scenario.outputs_b)
                        && in_range(x, scenario.inputs_a)
                        && in_range(y, scenario.inputs_b))
                    {
                        return Err(Error::Malformed(format!("entry ({a},{b},{x},{y}) outside scenario {scenario}")));
                    }
                    c[scenario.index(a as usize, b as usize, x as usize, y as usize)] = v;
                }
                let mut f = BellFunctional::from_dense(scenario, c, denominator)?;
                f.name = name;
                Ok(f)
            }
            NodeDoc::Product { first, second } => {
                let a = first.into_functional()?;
                let b = second.into_functional()?;
                let mut f = a.tensor(&b);
                f.name = None;
                Ok(f)
            }
            NodeDoc::Truncated { parent, keep_x, keep_y } => {
                let mut f = parent.into_functional()?.truncate(&keep_x, &keep_y)?;
                f.name = None;
                Ok(f)
            }
        }
    }
}

impl BellFunctional {
    /// Versioned JSON document holding the representation tree.
    pub fn to_json(&self) -> Result<String> {
        let doc = FunctionalDoc {
            version: FUNCTIONAL_DOC_VERSION,
            name: self.name.clone(),
            scenario: self.scenario,
            root: NodeDoc::from_functional(self),
        };
        Ok(serde_json::to_string(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<BellFunctional> {
        let doc: FunctionalDoc = serde_json::from_str(text)?;
        if doc.version != FUNCTIONAL_DOC_VERSION {
            return Err(Error::Version { found: doc.version, expected: FUNCTIONAL_DOC_VERSION });
        }
        let mut f = doc.root.into_functional()?;
        if f.scenario != doc.scenario {
            return Err(Error::Malformed(format!("declared scenario {} but tree builds {}", doc.scenario, f.scenario)));
        }
        f.name = doc.name;
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::builders::{chsh, magic};

    #[test]
    fn rejects_negative_coefficients() {
        let s = Scenario::new(1, 1, 2, 2).unwrap();
        assert!(BellFunctional::from_dense(s, vec![0, 1, -1, 0], 1).is_err());
        assert!(BellFunctional::from_dense(s, vec![0, 1, 1], 1).is_err());
        assert!(BellFunctional::from_dense(s, vec![0, 1, 1, 0], 0).is_err());
    }

    #[test]
    fn product_block_matches_coefficients() {
        let f = chsh().tensor(&magic());
        let s = f.scenario();
        for (x, y) in [(0, 0), (3, 5), (5, 2)] {
            let block = f.block(x, y);
            for a in 0..s.outputs_a {
                for b in 0..s.outputs_b {
                    assert_eq!(block[a * s.outputs_b + b], f.coefficient(a, b, x, y));
                }
            }
        }
    }

    #[test]
    fn truncation_rejects_bad_lists() {
        let f = chsh();
        assert!(f.truncate(&[], &[0]).is_err());
        assert!(f.truncate(&[0, 2], &[0]).is_err());
        assert!(f.truncate(&[1, 1], &[0]).is_err());
    }

    #[test]
    fn identity_truncation_keeps_coefficients() {
        let f = magic();
        let t = f.truncate(&[0, 1, 2], &[0, 1, 2]).unwrap();
        let s = f.scenario();
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(f.block(x, y), t.block(x, y));
            }
        }
        assert_eq!(t.scenario(), s);
    }

    #[test]
    fn product_labels_concatenate_digits() {
        let f = magic().tensor_power(2).unwrap();
        let labels = f.input_labels_a();
        assert_eq!(labels.len(), 9);
        assert_eq!(labels[7], "21");
        let t = f.truncate(&[0, 1, 3], &[0, 4]).unwrap();
        assert_eq!(t.input_labels_a(), vec!["00", "01", "10"]);
        assert_eq!(t.input_labels_b(), vec!["00", "11"]);
    }

    #[test]
    fn swap_is_an_involution() {
        let f = magic().tensor(&chsh());
        let back = f.swapped().swapped();
        let s = f.scenario();
        for x in 0..s.inputs_a {
            for y in 0..s.inputs_b {
                assert_eq!(f.block(x, y), back.block(x, y));
            }
        }
        assert!(chsh().is_party_symmetric());
    }

    #[test]
    fn json_round_trip_preserves_tree() {
        let f = magic().tensor_power(2).unwrap().truncate(&[0, 1, 2, 3, 4, 5, 6], &[0, 4, 8]).unwrap();
        let text = f.to_json().unwrap();
        let g = BellFunctional::from_json(&text).unwrap();
        assert_eq!(g.to_json().unwrap(), text);
        assert_eq!(g.scenario(), f.scenario());
        assert!(matches!(g.repr(), Repr::Truncated { .. }));
    }

    #[test]
    fn json_rejects_wrong_version() {
        let text = chsh().to_json().unwrap().replacen("\"version\":1", "\"version\":9", 1);
        assert!(matches!(BellFunctional::from_json(&text), Err(Error::Version { found: 9, .. })));
    }
}

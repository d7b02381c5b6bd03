use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{cglmp_event, Distribution, Scenario};
use crate::quantum::{Measurement, QuantumState, QuantumStrategy};

/// Measurement phase offsets in units of `2π/d`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CglmpPhases {
    pub alice: [f64; 2],
    pub bob: [f64; 2],
}

impl Default for CglmpPhases {
    /// Alice 0 and 1/2, Bob 1/4 and −1/4.
    fn default() -> Self {
        Self { alice: [0.0, 0.5], bob: [0.25, -0.25] }
    }
}

impl CglmpPhases {
    fn offset(&self, x: usize, y: usize) -> f64 {
        self.alice[x] + self.bob[y]
    }
}

fn check_d(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("CGLMP needs d ≥ 2, got {d}")));
    }
    Ok(())
}

fn check_schmidt(d: usize, schmidt: &[f64]) -> Result<()> {
    if schmidt.len() != d {
        return Err(Error::Dimension(format!("{} Schmidt coefficients for d = {d}", schmidt.len())));
    }
    QuantumState::Schmidt(schmidt.to_vec()).validate()
}

/// Fourier-type bases: Alice `|k⟩_x = Σ_j ω^{j(k+α_x)}|j⟩/√d`, Bob
/// `|l⟩_y = Σ_j ω^{−j(l−β_y)}|j⟩/√d`, with `ω = e^{2πi/d}`. On `Σ_j c_j|jj⟩` the joint
/// amplitude depends only on `k − l`: `Σ_j c_j ω^{−j(k−l+α_x+β_y)}/d`.
pub fn cglmp_measurements(d: usize, phases: &CglmpPhases) -> Result<(Vec<Measurement>, Vec<Measurement>)> {
    check_d(d)?;
    let norm = 1.0 / (d as f64).sqrt();
    let basis = |sign: f64, shift: f64| {
        DMatrix::from_fn(d, d, |j, k| {
            Complex64::from_polar(norm, sign * TAU * j as f64 * (k as f64 + shift) / d as f64)
        })
    };
    let alice = phases.alice.iter().map(|&a| Measurement::rank_one(basis(1.0, a))).collect::<Result<_>>()?;
    let bob = phases.bob.iter().map(|&b| Measurement::rank_one(basis(-1.0, -b))).collect::<Result<_>>()?;
    Ok((alice, bob))
}

/// Number of output pairs `(k, l)` with `k − l ≡ δ (mod d)` inside the event of `(x, y)`.
fn event_counts(d: usize, x: usize, y: usize) -> Vec<f64> {
    let mut counts = vec![0.0; d];
    for (delta, slot) in counts.iter_mut().enumerate() {
        // k − l = δ ≥ 0 has d − δ pairs, represented by (δ, 0); k − l = δ − d < 0 has
        // δ pairs, represented by (0, d − δ). Events only compare k with l.
        let forward = if cglmp_event(x, y, delta, 0) { (d - delta) as f64 } else { 0.0 };
        let backward = if delta > 0 && cglmp_event(x, y, 0, d - delta) { delta as f64 } else { 0.0 };
        *slot = forward + backward;
    }
    counts
}

/// `g(δ) = |Σ_j c_j ω^{−j(δ+φ)}|²/d²`, the probability of each output pair with `k − l ≡ δ`.
fn difference_probs(schmidt: &[f64], offset: f64) -> Vec<f64> {
    let d = schmidt.len();
    let scale = 1.0 / (d * d) as f64;
    (0..d)
        .map(|delta| {
            let amp: Complex64 = schmidt
                .iter()
                .enumerate()
                .map(|(j, &c)| Complex64::from_polar(c, -TAU * j as f64 * (delta as f64 + offset) / d as f64))
                .sum();
            amp.norm_sqr() * scale
        })
        .collect()
}

/// Single-copy CGLMP term matrix `t[x][y] = Σ_{ab} S_abxy P(ab|xy)`, in `O(d²)` per pair.
pub fn cglmp_term_matrix(d: usize, schmidt: &[f64], phases: &CglmpPhases) -> Result<[[f64; 2]; 2]> {
    check_d(d)?;
    check_schmidt(d, schmidt)?;
    let mut t = [[0.0; 2]; 2];
    for (x, row) in t.iter_mut().enumerate() {
        for (y, slot) in row.iter_mut().enumerate() {
            let g = difference_probs(schmidt, phases.offset(x, y));
            *slot = event_counts(d, x, y).iter().zip(&g).map(|(c, p)| c * p).sum();
        }
    }
    Ok(t)
}

/// Fourier strategy with its term matrix.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CglmpStrategy {
    pub d: usize,
    pub schmidt: Vec<f64>,
    pub phases: CglmpPhases,
    pub terms: [[f64; 2]; 2],
}

impl CglmpStrategy {
    pub fn value(&self) -> f64 {
        self.terms.iter().flatten().sum()
    }

    /// Full table `P(kl|xy) = g_xy(k − l mod d)`, `O(d²)` per input pair.
    pub fn distribution(&self) -> Result<Distribution> {
        let d = self.d;
        let scenario = Scenario::new(2, 2, d, d)?;
        let mut probs = vec![0.0; scenario.dense_len().expect("small scenario")];
        for x in 0..2 {
            for y in 0..2 {
                let g = difference_probs(&self.schmidt, self.phases.offset(x, y));
                for k in 0..d {
                    for l in 0..d {
                        probs[scenario.index(k, l, x, y)] = g[(k + d - l) % d];
                    }
                }
            }
        }
        Distribution::new(scenario, probs)
    }

    /// Explicit state and measurements (dimension `d`).
    pub fn strategy(&self) -> Result<QuantumStrategy> {
        let (alice, bob) = cglmp_measurements(self.d, &self.phases)?;
        QuantumStrategy::new(QuantumState::Schmidt(self.schmidt.clone()), alice, bob)
    }
}

pub fn cglmp_strategy(d: usize, schmidt: &[f64]) -> Result<CglmpStrategy> {
    let phases = CglmpPhases::default();
    let terms = cglmp_term_matrix(d, schmidt, &phases)?;
    Ok(CglmpStrategy { d, schmidt: schmidt.to_vec(), phases, terms })
}

/// Per-pair Toeplitz quadratic forms: `h_xy[Δ]` for `Δ = j − j' ∈ [0, d)` such that the
/// `(x, y)` term equals `Σ_{j,j'} c_j c_j' h_xy[|j − j'|]`.
fn toeplitz_terms(d: usize, phases: &CglmpPhases) -> [[Vec<f64>; 2]; 2] {
    let scale = 1.0 / (d * d) as f64;
    let one = |x: usize, y: usize| -> Vec<f64> {
        let counts = event_counts(d, x, y);
        let offset = phases.offset(x, y);
        (0..d)
            .into_par_iter()
            .map(|delta_j| {
                counts
                    .iter()
                    .enumerate()
                    .map(|(delta, c)| c * (TAU * delta_j as f64 * (delta as f64 + offset) / d as f64).cos())
                    .sum::<f64>()
                    * scale
            })
            .collect()
    };
    [[one(0, 0), one(0, 1)], [one(1, 0), one(1, 1)]]
}

/// Symmetric `d × d` matrix `M` with CGLMP value `cᵀMc` for Schmidt vector `c`.
pub fn cglmp_quadratic_form(d: usize, phases: &CglmpPhases) -> Result<DMatrix<f64>> {
    check_d(d)?;
    let h = toeplitz_terms(d, phases);
    let total: Vec<f64> = (0..d).map(|k| h.iter().flatten().map(|v| v[k]).sum()).collect();
    Ok(DMatrix::from_fn(d, d, |i, j| total[i.abs_diff(j)]))
}

/// Optimal Schmidt vector for the default measurements: the top eigenvector of the
/// quadratic form with its entries replaced by their absolute values.
pub fn cglmp_optimize_state(d: usize) -> Result<(Vec<f64>, f64)> {
    let m = cglmp_quadratic_form(d, &CglmpPhases::default())?;
    let eig = m.clone().symmetric_eigen();
    let top = eig.eigenvalues.imax();
    let lambda = eig.eigenvalues[top];
    let c: DVector<f64> = eig.eigenvectors.column(top).map(f64::abs);
    let c = &c / c.norm();
    let value = (c.transpose() * &m * &c)[(0, 0)];
    if value < lambda - 1e-9 {
        return Err(Error::Validation(format!("absolute-value projection lowered the value {lambda} to {value}")));
    }
    Ok((c.iter().copied().collect(), value))
}

/// Value of an `n`-copy product strategy on the (optionally truncated) `n`-fold
/// functional: `Σ_{kept x, y} Π_i t[x_i][y_i]`, inputs as base-`m` digit strings with the
/// first copy most significant. `t` is `m_A × m_B`, row-major.
pub fn product_value(
    t: &[f64],
    inputs_a: usize,
    inputs_b: usize,
    copies: usize,
    keep_x: Option<&[usize]>,
    keep_y: Option<&[usize]>,
) -> Result<f64> {
    if t.len() != inputs_a * inputs_b || copies == 0 {
        return Err(Error::Dimension(format!("term matrix of length {} for {inputs_a}x{inputs_b}", t.len())));
    }
    let total_a = inputs_a.checked_pow(copies as u32).ok_or_else(|| Error::TooLarge("input count".into()))?;
    let total_b = inputs_b.checked_pow(copies as u32).ok_or_else(|| Error::TooLarge("input count".into()))?;
    let all_a: Vec<usize> = (0..total_a).collect();
    let all_b: Vec<usize> = (0..total_b).collect();
    let keep_x = keep_x.unwrap_or(&all_a);
    let keep_y = keep_y.unwrap_or(&all_b);
    if let Some(bad) = keep_x.iter().find(|&&x| x >= total_a).or_else(|| keep_y.iter().find(|&&y| y >= total_b)) {
        return Err(Error::InvalidArgument(format!("kept input {bad} out of range")));
    }
    let digits = |mut v: usize, radix: usize| -> Vec<usize> {
        let mut out = vec![0; copies];
        for slot in out.iter_mut().rev() {
            *slot = v % radix;
            v /= radix;
        }
        out
    };
    let xs: Vec<Vec<usize>> = keep_x.iter().map(|&x| digits(x, inputs_a)).collect();
    let ys: Vec<Vec<usize>> = keep_y.iter().map(|&y| digits(y, inputs_b)).collect();
    Ok(xs
        .iter()
        .flat_map(|x| ys.iter().map(move |y| (x, y)))
        .map(|(x, y)| (0..copies).map(|i| t[x[i] * inputs_b + y[i]]).product::<f64>())
        .sum())
}

/// Term matrix flattened row-major, for [`product_value`].
pub fn flatten_terms(t: &[[f64; 2]; 2]) -> Vec<f64> {
    t.iter().flatten().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{cglmp, DISTRIBUTION_TOL};
    use crate::quantum::strategy_distribution;

    const TABLE: [f64; 9] = [3.2071, 3.3050, 3.3648, 3.4063, 3.4374, 3.4618, 3.4818, 3.4985, 3.5128];

    #[test]
    fn event_counts_cover_all_pairs() {
        for d in 2..7 {
            for x in 0..2 {
                for y in 0..2 {
                    let direct: f64 = (0..d)
                        .flat_map(|a| (0..d).map(move |b| (a, b)))
                        .filter(|&(a, b)| cglmp_event(x, y, a, b))
                        .count() as f64;
                    assert_eq!(event_counts(d, x, y).iter().sum::<f64>(), direct);
                }
            }
        }
    }

    #[test]
    fn optimized_values_match_table() {
        for (i, want) in TABLE.iter().enumerate() {
            let (_, value) = cglmp_optimize_state(i + 2).unwrap();
            assert!((value - want).abs() < 1e-4, "d = {}: {value}", i + 2);
        }
    }

    #[test]
    fn uniform_d2_is_affine_chsh() {
        let s = cglmp_strategy(2, &[0.5f64.sqrt(); 2]).unwrap();
        assert!((s.value() - (5.0 + 2f64.sqrt()) / 2.0).abs() < 1e-9);
    }

    #[test]
    fn term_matrix_matches_explicit_strategy() {
        for d in 2..6 {
            let (c, _) = cglmp_optimize_state(d).unwrap();
            let s = cglmp_strategy(d, &c).unwrap();
            let f = cglmp(d).unwrap();
            let explicit = strategy_distribution(f.scenario(), &s.strategy().unwrap()).unwrap();
            let fast = s.distribution().unwrap();
            for (p, q) in explicit.as_slice().iter().zip(fast.as_slice()) {
                assert!((p - q).abs() < 1e-12);
            }
            assert!((f.evaluate(&explicit).unwrap() - s.value()).abs() < 1e-9);
            explicit.check_no_signalling(DISTRIBUTION_TOL).unwrap();
        }
    }

    #[test]
    fn product_value_of_full_power_is_square() {
        let (c, v) = cglmp_optimize_state(4).unwrap();
        let t = flatten_terms(&cglmp_strategy(4, &c).unwrap().terms);
        let two = product_value(&t, 2, 2, 2, None, None).unwrap();
        assert!((two - v * v).abs() < 1e-9);
    }

    #[test]
    fn product_value_rejects_out_of_range() {
        let t = vec![1.0; 4];
        assert!(product_value(&t, 2, 2, 2, Some(&[4]), None).is_err());
    }
}

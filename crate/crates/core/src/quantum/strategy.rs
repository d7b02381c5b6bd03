use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Distribution, Scenario};

pub type CMatrix = DMatrix<Complex64>;

/// Tolerance for unitarity of measurement bases.
pub const UNITARY_TOL: f64 = 1e-10;

/// Tolerance for state normalization.
pub const STATE_TOL: f64 = 1e-12;

/// Kronecker product `A ⊗ B`, first factor major.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac, br, bc) = (a.nrows(), a.ncols(), b.nrows(), b.ncols());
    DMatrix::from_fn(ar * br, ac * bc, |r, c| a[(r / br, c / bc)] * b[(r % br, c % bc)])
}

/// Projective measurement: an orthonormal basis (columns) whose vectors are grouped
/// into outcomes. Outcome `a` has projector `Σ_{k: outcome_of[k]=a} |v_k⟩⟨v_k|`.
#[derive(Clone, Debug, PartialEq)]
pub struct Measurement {
    basis: CMatrix,
    outcome_of: Vec<usize>,
    outcomes: usize,
}

impl Measurement {
    pub fn new(basis: CMatrix, outcome_of: Vec<usize>, outcomes: usize) -> Result<Self> {
        let d = basis.nrows();
        if basis.ncols() != d || outcome_of.len() != d || d == 0 {
            return Err(Error::Dimension(format!(
                "basis is {}x{} with {} outcome labels",
                basis.nrows(),
                basis.ncols(),
                outcome_of.len()
            )));
        }
        if let Some(&bad) = outcome_of.iter().find(|&&o| o >= outcomes) {
            return Err(Error::InvalidArgument(format!("outcome label {bad} out of range (0..{outcomes})")));
        }
        let gram = basis.adjoint() * &basis;
        let err = (gram - CMatrix::identity(d, d)).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if err > UNITARY_TOL {
            return Err(Error::Validation(format!("measurement basis deviates from unitary by {err:e}")));
        }
        Ok(Self { basis, outcome_of, outcomes })
    }

    /// One outcome per basis vector.
    pub fn rank_one(basis: CMatrix) -> Result<Self> {
        let d = basis.nrows();
        Self::new(basis, (0..d).collect(), d)
    }

    /// Measurement from mutually orthogonal projectors summing to the identity.
    pub fn from_projectors(projectors: &[CMatrix]) -> Result<Self> {
        let d = projectors.first().map_or(0, |p| p.nrows());
        let mut columns = Vec::with_capacity(d);
        let mut outcome_of = Vec::with_capacity(d);
        for (a, p) in projectors.iter().enumerate() {
            let hermitian = (p + p.adjoint()) * Complex64::new(0.5, 0.0);
            let eig = hermitian.symmetric_eigen();
            for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
                if lambda > 0.5 {
                    columns.push(eig.eigenvectors.column(k).into_owned());
                    outcome_of.push(a);
                }
            }
        }
        if columns.len() != d {
            return Err(Error::Validation(format!("projectors have total rank {} in dimension {d}", columns.len())));
        }
        Self::new(CMatrix::from_columns(&columns), outcome_of, projectors.len())
    }

    /// Two-outcome measurement of a Hermitian involution: outcome 0 ↔ eigenvalue +1.
    pub fn from_observable(observable: &CMatrix) -> Result<Self> {
        let d = observable.nrows();
        let id = CMatrix::identity(d, d);
        let half = Complex64::new(0.5, 0.0);
        Self::from_projectors(&[(&id + observable) * half, (&id - observable) * half])
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn outcomes(&self) -> usize {
        self.outcomes
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn outcome_of(&self) -> &[usize] {
        &self.outcome_of
    }

    pub fn projector(&self, a: usize) -> CMatrix {
        let d = self.dim();
        let mut p = CMatrix::zeros(d, d);
        for (k, _) in self.outcome_of.iter().enumerate().filter(|(_, &o)| o == a) {
            let v = self.basis.column(k);
            p += v * v.adjoint();
        }
        p
    }

    /// Joint measurement on a tensor product; outcome `a₁·o₂ + a₂`.
    pub fn tensor(&self, other: &Measurement) -> Measurement {
        let outcome_of = self
            .outcome_of
            .iter()
            .flat_map(|&a| other.outcome_of.iter().map(move |&b| a * other.outcomes + b))
            .collect();
        Measurement { basis: kron(&self.basis, &other.basis), outcome_of, outcomes: self.outcomes * other.outcomes }
    }
}

/// Pure bipartite state: Schmidt coefficients `Σ_j c_j |jj⟩` or a full amplitude
/// matrix `Ψ_ij = ⟨ij|ψ⟩` (rows Alice, columns Bob).
#[derive(Clone, Debug, PartialEq)]
pub enum QuantumState {
    Schmidt(Vec<f64>),
    Full(CMatrix),
}

impl QuantumState {
    pub fn maximally_entangled(d: usize) -> Self {
        QuantumState::Schmidt(vec![1.0 / (d as f64).sqrt(); d])
    }

    pub fn dims(&self) -> (usize, usize) {
        match self {
            QuantumState::Schmidt(c) => (c.len(), c.len()),
            QuantumState::Full(m) => (m.nrows(), m.ncols()),
        }
    }

    pub fn matrix(&self) -> CMatrix {
        match self {
            QuantumState::Schmidt(c) => {
                let d = c.len();
                DMatrix::from_fn(d, d, |i, j| if i == j { Complex64::new(c[i], 0.0) } else { Complex64::new(0.0, 0.0) })
            }
            QuantumState::Full(m) => m.clone(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let norm_sq = match self {
            QuantumState::Schmidt(c) => {
                if let Some(bad) = c.iter().find(|v| v.is_nan() || **v < 0.0) {
                    return Err(Error::Validation(format!("negative Schmidt coefficient {bad}")));
                }
                c.iter().map(|v| v * v).sum::<f64>()
            }
            QuantumState::Full(m) => m.iter().map(|z| z.norm_sqr()).sum(),
        };
        if (norm_sq - 1.0).abs() > STATE_TOL {
            return Err(Error::Validation(format!("state has squared norm {norm_sq}")));
        }
        Ok(())
    }

    pub fn tensor(&self, other: &QuantumState) -> QuantumState {
        match (self, other) {
            (QuantumState::Schmidt(a), QuantumState::Schmidt(b)) => {
                QuantumState::Schmidt(a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect())
            }
            _ => QuantumState::Full(kron(&self.matrix(), &other.matrix())),
        }
    }
}

/// State plus one projective measurement per input on each side.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumStrategy {
    pub state: QuantumState,
    pub alice: Vec<Measurement>,
    pub bob: Vec<Measurement>,
}

impl QuantumStrategy {
    pub fn new(state: QuantumState, alice: Vec<Measurement>, bob: Vec<Measurement>) -> Result<Self> {
        let s = Self { state, alice, bob };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        self.state.validate()?;
        let (da, db) = self.state.dims();
        if self.alice.is_empty() || self.bob.is_empty() {
            return Err(Error::InvalidArgument("each party needs at least one measurement".into()));
        }
        for (party, list, d) in [("Alice", &self.alice, da), ("Bob", &self.bob, db)] {
            if let Some(m) = list.iter().find(|m| m.dim() != d) {
                return Err(Error::Dimension(format!("{party} measures in dimension {} but holds {d}", m.dim())));
            }
            if list.iter().any(|m| m.outcomes() != list[0].outcomes()) {
                return Err(Error::InvalidArgument(format!("{party}'s measurements differ in outcome count")));
            }
        }
        Ok(())
    }

    pub fn scenario(&self) -> Scenario {
        Scenario {
            inputs_a: self.alice.len(),
            inputs_b: self.bob.len(),
            outputs_a: self.alice[0].outcomes(),
            outputs_b: self.bob[0].outcomes(),
        }
    }

    /// Independent play of two strategies (first copy major in inputs and outputs).
    pub fn tensor(&self, other: &QuantumStrategy) -> QuantumStrategy {
        let pair = |l: &[Measurement], r: &[Measurement]| -> Vec<Measurement> {
            l.iter().flat_map(|a| r.iter().map(move |b| a.tensor(b))).collect()
        };
        QuantumStrategy {
            state: self.state.tensor(&other.state),
            alice: pair(&self.alice, &other.alice),
            bob: pair(&self.bob, &other.bob),
        }
    }

    pub fn tensor_power(&self, n: usize) -> Result<QuantumStrategy> {
        if n == 0 {
            return Err(Error::InvalidArgument("tensor power needs n ≥ 1".into()));
        }
        Ok((1..n).fold(self.clone(), |acc, _| acc.tensor(self)))
    }

    /// Keeps only the listed inputs, in the given order.
    pub fn restrict(&self, keep_x: &[usize], keep_y: &[usize]) -> Result<QuantumStrategy> {
        let pick = |list: &[Measurement], keep: &[usize]| -> Result<Vec<Measurement>> {
            keep.iter()
                .map(|&i| list.get(i).cloned().ok_or_else(|| Error::InvalidArgument(format!("input {i} out of range"))))
                .collect()
        };
        QuantumStrategy::new(self.state.clone(), pick(&self.alice, keep_x)?, pick(&self.bob, keep_y)?)
    }
}

/// Born-rule table `P(ab|xy) = ⟨ψ|P_{a|x} ⊗ P_{b|y}|ψ⟩`.
///
/// With `Ψ` the amplitude matrix, `⟨v_k ⊗ w_l|ψ⟩ = (V^H Ψ W̄)_{kl}`; probabilities sum
/// the squared moduli over the basis vectors of each outcome.
pub fn strategy_distribution(scenario: Scenario, qs: &QuantumStrategy) -> Result<Distribution> {
    qs.validate()?;
    if qs.scenario() != scenario {
        return Err(Error::ScenarioMismatch { expected: scenario, found: qs.scenario() });
    }
    let psi = qs.state.matrix();
    let len = scenario.dense_len().ok_or_else(|| Error::TooLarge(format!("distribution for {scenario}")))?;
    let mut probs = vec![0.0; len];
    let bob_conj: Vec<CMatrix> = qs.bob.iter().map(|m| m.basis().map(|z| z.conj())).collect();
    for (x, ma) in qs.alice.iter().enumerate() {
        let left = ma.basis().adjoint() * &psi;
        for (y, mb) in qs.bob.iter().enumerate() {
            let amp = &left * &bob_conj[y];
            let start = scenario.index(0, 0, x, y);
            for (k, &a) in ma.outcome_of().iter().enumerate() {
                for (l, &b) in mb.outcome_of().iter().enumerate() {
                    probs[start + a * scenario.outputs_b + b] += amp[(k, l)].norm_sqr();
                }
            }
        }
    }
    Distribution::new(scenario, probs)
}

/// `E_xy = Σ_ab (−1)^{a⊕b} P(ab|xy)` for two-outcome distributions, row-major.
pub fn correlators(dist: &Distribution) -> Result<Vec<f64>> {
    let s = dist.scenario();
    if s.outputs_a != 2 || s.outputs_b != 2 {
        return Err(Error::InvalidArgument(format!("correlators need two outputs per party, scenario {s}")));
    }
    Ok((0..s.inputs_a)
        .flat_map(|x| (0..s.inputs_b).map(move |y| (x, y)))
        .map(|(x, y)| {
            let p = dist.block(x, y);
            p[0] + p[3] - p[1] - p[2]
        })
        .collect())
}

// ---------------------------------------------------------------------------
// JSON

pub const STRATEGY_DOC_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct MeasurementDoc {
    /// Basis vectors (columns) as lists of `[re, im]` pairs.
    basis: Vec<Vec<[f64; 2]>>,
    outcome_of: Vec<usize>,
    outcomes: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum StateDoc {
    /// Schmidt coefficients as decimals with full `f64` round-trip precision.
    Schmidt { coefficients: Vec<f64> },
    /// Amplitude matrix rows as lists of `[re, im]` pairs.
    Full { rows: Vec<Vec<[f64; 2]>> },
}

#[derive(Serialize, Deserialize)]
struct StrategyDoc {
    version: u32,
    state: StateDoc,
    alice: Vec<MeasurementDoc>,
    bob: Vec<MeasurementDoc>,
}

fn pair(z: &Complex64) -> [f64; 2] {
    [z.re, z.im]
}

impl MeasurementDoc {
    fn from(m: &Measurement) -> Self {
        let basis = m.basis.column_iter().map(|c| c.iter().map(pair).collect()).collect();
        Self { basis, outcome_of: m.outcome_of.clone(), outcomes: m.outcomes }
    }

    fn into_measurement(self) -> Result<Measurement> {
        let d = self.basis.len();
        if self.basis.iter().any(|c| c.len() != d) {
            return Err(Error::Malformed("measurement basis is not square".into()));
        }
        let basis = DMatrix::from_fn(d, d, |r, c| Complex64::new(self.basis[c][r][0], self.basis[c][r][1]));
        Measurement::new(basis, self.outcome_of, self.outcomes)
    }
}

impl QuantumStrategy {
    pub fn to_json(&self) -> Result<String> {
        let state = match &self.state {
            QuantumState::Schmidt(c) => StateDoc::Schmidt { coefficients: c.clone() },
            QuantumState::Full(m) => {
                StateDoc::Full { rows: m.row_iter().map(|r| r.iter().map(pair).collect()).collect() }
            }
        };
        let doc = StrategyDoc {
            version: STRATEGY_DOC_VERSION,
            state,
            alice: self.alice.iter().map(MeasurementDoc::from).collect(),
            bob: self.bob.iter().map(MeasurementDoc::from).collect(),
        };
        Ok(serde_json::to_string(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: StrategyDoc = serde_json::from_str(text)?;
        if doc.version != STRATEGY_DOC_VERSION {
            return Err(Error::Version { found: doc.version, expected: STRATEGY_DOC_VERSION });
        }
        let state = match doc.state {
            StateDoc::Schmidt { coefficients } => QuantumState::Schmidt(coefficients),
            StateDoc::Full { rows } => {
                let (r, c) = (rows.len(), rows.first().map_or(0, Vec::len));
                if rows.iter().any(|row| row.len() != c) {
                    return Err(Error::Malformed("state rows differ in length".into()));
                }
                QuantumState::Full(DMatrix::from_fn(r, c, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1])))
            }
        };
        let alice = doc.alice.into_iter().map(MeasurementDoc::into_measurement).collect::<Result<_>>()?;
        let bob = doc.bob.into_iter().map(MeasurementDoc::into_measurement).collect::<Result<_>>()?;
        QuantumStrategy::new(state, alice, bob)
    }
}

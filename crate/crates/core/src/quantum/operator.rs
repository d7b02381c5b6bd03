use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::BellFunctional;
use crate::quantum::{kron, CMatrix, Measurement, QuantumState};

/// Largest operator dimension `d_A·d_B` assembled densely.
pub const OPERATOR_LIMIT: usize = 4096;

/// Hermitian operator `Σ S_abxy P_{a|x} ⊗ P_{b|y}` (user scale).
#[derive(Clone, Debug)]
pub struct BellOperator {
    pub matrix: CMatrix,
    pub dim_a: usize,
    pub dim_b: usize,
    pub provenance: String,
}

impl BellOperator {
    /// Largest deviation from hermiticity.
    pub fn hermiticity_error(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `⟨ψ|W|ψ⟩` for a state of matching dimensions.
    pub fn expectation(&self, state: &QuantumState) -> Result<f64> {
        if state.dims() != (self.dim_a, self.dim_b) {
            return Err(Error::Dimension(format!(
                "state {:?} for operator {}x{}",
                state.dims(),
                self.dim_a,
                self.dim_b
            )));
        }
        let m = state.matrix();
        let v = CMatrix::from_iterator(self.dim_a * self.dim_b, 1, m.transpose().iter().copied());
        Ok((v.adjoint() * &self.matrix * &v)[(0, 0)].re)
    }
}

pub fn bell_operator(f: &BellFunctional, alice: &[Measurement], bob: &[Measurement]) -> Result<BellOperator> {
    let s = f.scenario();
    if alice.len() != s.inputs_a || bob.len() != s.inputs_b {
        return Err(Error::Dimension(format!("{} and {} measurements for scenario {s}", alice.len(), bob.len())));
    }
    if alice.iter().any(|m| m.outcomes() != s.outputs_a) || bob.iter().any(|m| m.outcomes() != s.outputs_b) {
        return Err(Error::Dimension(format!("measurement outcome counts differ from scenario {s}")));
    }
    let (da, db) = (alice[0].dim(), bob[0].dim());
    if alice.iter().any(|m| m.dim() != da) || bob.iter().any(|m| m.dim() != db) {
        return Err(Error::Dimension("measurements of one party differ in dimension".into()));
    }
    if da * db > OPERATOR_LIMIT {
        return Err(Error::TooLarge(format!("operator dimension {} exceeds {OPERATOR_LIMIT}", da * db)));
    }
    let scale = 1.0 / f.denominator() as f64;
    let pa: Vec<Vec<CMatrix>> = alice.iter().map(|m| (0..s.outputs_a).map(|a| m.projector(a)).collect()).collect();
    let pb: Vec<Vec<CMatrix>> = bob.iter().map(|m| (0..s.outputs_b).map(|b| m.projector(b)).collect()).collect();
    let mut w = CMatrix::zeros(da * db, da * db);
    for x in 0..s.inputs_a {
        for y in 0..s.inputs_b {
            let block = f.block(x, y);
            for a in 0..s.outputs_a {
                let row = &block[a * s.outputs_b..(a + 1) * s.outputs_b];
                if row.iter().all(|&c| c == 0) {
                    continue;
                }
                let mut q = CMatrix::zeros(db, db);
                for (b, &c) in row.iter().enumerate().filter(|(_, &c)| c != 0) {
                    q += &pb[y][b] * Complex64::new(c as f64 * scale, 0.0);
                }
                w += kron(&pa[x][a], &q);
            }
        }
    }
    let provenance = format!("{} with {}+{} measurements", f.name().unwrap_or("functional"), alice.len(), bob.len());
    Ok(BellOperator { matrix: w, dim_a: da, dim_b: db, provenance })
}

/// Top eigenpair: the optimal state for fixed measurements and its value.
pub fn best_state(op: &BellOperator) -> (QuantumState, f64) {
    let hermitian = (&op.matrix + op.matrix.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = hermitian.symmetric_eigen();
    let top = eig.eigenvalues.imax();
    let v = eig.eigenvectors.column(top);
    let state = CMatrix::from_fn(op.dim_a, op.dim_b, |i, j| v[i * op.dim_b + j]);
    (QuantumState::Full(state), eig.eigenvalues[top])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{cglmp, chsh, magic};
    use crate::quantum::{cglmp_measurements, cglmp_optimize_state, chsh_quantum, magic_quantum, CglmpPhases};

    #[test]
    fn chsh_operator_top_eigenvalue() {
        let (qs, _) = chsh_quantum().unwrap();
        let op = bell_operator(&chsh(), &qs.alice, &qs.bob).unwrap();
        assert!(op.hermiticity_error() < 1e-12);
        let (state, value) = best_state(&op);
        assert!((value - (2.0 + 2f64.sqrt())).abs() < 1e-9);
        assert!((op.expectation(&state).unwrap() - value).abs() < 1e-9);
        assert!(op.expectation(&qs.state).unwrap() <= value + 1e-12);
    }

    #[test]
    fn magic_operator_top_eigenvalue() {
        let (qs, _) = magic_quantum().unwrap();
        let (_, value) = best_state(&bell_operator(&magic(), &qs.alice, &qs.bob).unwrap());
        assert!((value - 9.0).abs() < 1e-9);
    }

    #[test]
    fn cglmp3_operator_matches_quadratic_form() {
        let (alice, bob) = cglmp_measurements(3, &CglmpPhases::default()).unwrap();
        let (_, value) = best_state(&bell_operator(&cglmp(3).unwrap(), &alice, &bob).unwrap());
        let (_, form) = cglmp_optimize_state(3).unwrap();
        assert!((value - form).abs() < 1e-9, "{value} vs {form}");
    }

    #[test]
    fn dimension_guard() {
        let (alice, bob) = cglmp_measurements(65, &CglmpPhases::default()).unwrap();
        assert!(bell_operator(&cglmp(65).unwrap(), &alice, &bob).is_err());
    }
}

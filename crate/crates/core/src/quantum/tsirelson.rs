use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::platonic::VectorConfiguration;
use crate::quantum::{kron, pauli_i, pauli_x, pauli_y, pauli_z, CMatrix, Measurement, QuantumState, QuantumStrategy};

/// Largest span dimension handled (operators of size `2^⌊n/2⌋ ≤ 16`).
pub const TSIRELSON_MAX_DIM: usize = 9;

fn kron_all(factors: &[CMatrix]) -> CMatrix {
    factors.iter().skip(1).fold(factors[0].clone(), |acc, f| kron(&acc, f))
}

/// `n` mutually anticommuting Hermitian involutions of size `2^⌊n/2⌋`:
/// `Z^{⊗k} ⊗ X ⊗ I^{⊗(r−k−1)}`, `Z^{⊗k} ⊗ Y ⊗ I^{⊗(r−k−1)}` for `k < r = ⌊n/2⌋`,
/// plus `Z^{⊗r}` when `n` is odd.
pub fn gamma_matrices(n: usize) -> Result<Vec<CMatrix>> {
    if n == 0 || n > TSIRELSON_MAX_DIM {
        return Err(Error::InvalidArgument(format!("gamma matrices need 1 ≤ n ≤ {TSIRELSON_MAX_DIM}, got {n}")));
    }
    let r = n / 2;
    if r == 0 {
        return Ok(vec![CMatrix::identity(1, 1)]);
    }
    let mut out = Vec::with_capacity(n);
    for k in 0..r {
        for middle in [pauli_x(), pauli_y()] {
            let mut factors = vec![pauli_z(); k];
            factors.push(middle);
            factors.extend(std::iter::repeat_n(pauli_i(), r - k - 1));
            out.push(kron_all(&factors));
        }
    }
    if n % 2 == 1 {
        out.push(kron_all(&vec![pauli_z(); r]));
    }
    Ok(out)
}

/// Observable `Σ_j u_j Γ_j` for a unit vector `u`; squares to the identity.
fn observable(gammas: &[CMatrix], u: &[f64]) -> CMatrix {
    let d = gammas[0].nrows();
    gammas.iter().zip(u).fold(CMatrix::zeros(d, d), |acc, (g, &c)| acc + g * Complex64::new(c, 0.0))
}

/// Two-outcome strategy with correlators `E_xy = V_x·V_y`: Alice measures
/// `A_x = Σ_j V_xj Γ_j`, Bob the transposes `A_yᵀ`, on the maximally entangled state
/// of dimension `2^⌊n/2⌋` (`⟨Φ|A ⊗ Bᵀ|Φ⟩ = tr(AB)/D`).
pub fn tsirelson_measurements(v: &VectorConfiguration) -> Result<QuantumStrategy> {
    let n = v.dim();
    let gammas = gamma_matrices(n)?;
    let coords = v.orthonormal_coordinates();
    let alice =
        coords.iter().map(|u| Measurement::from_observable(&observable(&gammas, u))).collect::<Result<Vec<_>>>()?;
    let bob = coords
        .iter()
        .map(|u| Measurement::from_observable(&observable(&gammas, u).transpose()))
        .collect::<Result<Vec<_>>>()?;
    QuantumStrategy::new(QuantumState::maximally_entangled(gammas[0].nrows()), alice, bob)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gammas_anticommute() {
        for n in 1..=TSIRELSON_MAX_DIM {
            let g = gamma_matrices(n).unwrap();
            assert_eq!(g.len(), n);
            let d = g[0].nrows();
            assert_eq!(d, 1 << (n / 2));
            for j in 0..n {
                assert!((&g[j] - g[j].adjoint()).norm() < 1e-12);
                for k in 0..n {
                    let anti = &g[j] * &g[k] + &g[k] * &g[j];
                    let want =
                        if j == k { CMatrix::identity(d, d) * Complex64::new(2.0, 0.0) } else { CMatrix::zeros(d, d) };
                    assert!((anti - want).norm() < 1e-12, "n={n} j={j} k={k}");
                }
            }
        }
    }

    #[test]
    fn rejects_large_n() {
        assert!(gamma_matrices(10).is_err());
        assert!(gamma_matrices(0).is_err());
    }
}

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Result;
use crate::model::{chsh, magic};
use crate::quantum::{kron, strategy_distribution, CMatrix, Measurement, QuantumState, QuantumStrategy};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli_i() -> CMatrix {
    CMatrix::identity(2, 2)
}

pub fn pauli_x() -> CMatrix {
    DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
}

pub fn pauli_y() -> CMatrix {
    DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
}

pub fn pauli_z() -> CMatrix {
    DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)])
}

/// Real qubit measurement along angle `θ` in the X–Z plane: outcome 0 is
/// `(cos θ/2, sin θ/2)`, outcome 1 is `(−sin θ/2, cos θ/2)`.
pub fn qubit_measurement(theta: f64) -> Measurement {
    let (s, co) = (theta / 2.0).sin_cos();
    let basis = DMatrix::from_row_slice(2, 2, &[c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)]);
    Measurement::rank_one(basis).expect("rotation is unitary")
}

/// Optimal CHSH strategy: `|Φ⁺⟩`, Alice at angles 0 and π/2, Bob at ±π/4.
/// Returns the strategy and its value `2 + √2`.
pub fn chsh_quantum() -> Result<(QuantumStrategy, f64)> {
    use std::f64::consts::FRAC_PI_4;
    let qs = QuantumStrategy::new(
        QuantumState::maximally_entangled(2),
        vec![qubit_measurement(0.0), qubit_measurement(2.0 * FRAC_PI_4)],
        vec![qubit_measurement(FRAC_PI_4), qubit_measurement(-FRAC_PI_4)],
    )?;
    let f = chsh();
    let value = f.evaluate(&strategy_distribution(f.scenario(), &qs)?)?;
    Ok((qs, value))
}

/// Two-qubit observable grid: every row and column is a commuting triple; rows
/// multiply to `+I`, columns to `−I`.
pub fn magic_grid() -> [[CMatrix; 3]; 3] {
    let (i, x, y, z) = (pauli_i(), pauli_x(), pauli_y(), pauli_z());
    let neg = |m: CMatrix| -m;
    [
        [kron(&x, &i), kron(&i, &x), kron(&x, &x)],
        [kron(&i, &z), kron(&z, &i), kron(&z, &z)],
        [neg(kron(&x, &z)), neg(kron(&z, &x)), kron(&y, &y)],
    ]
}

/// Joint eigenbasis of two commuting involutions; outcome `2·b₀ + b₁` for eigenvalues
/// `((−1)^{b₀}, (−1)^{b₁})`.
fn pair_measurement(first: &CMatrix, second: &CMatrix) -> Result<Measurement> {
    let id = CMatrix::identity(first.nrows(), first.ncols());
    let half = c(0.5, 0.0);
    let projector = |o: &CMatrix, bit: usize| if bit == 0 { (&id + o) * half } else { (&id - o) * half };
    let projectors: Vec<CMatrix> = (0..4).map(|out| projector(first, out >> 1) * projector(second, out & 1)).collect();
    Measurement::from_projectors(&projectors)
}

/// Pseudo-telepathy strategy on two maximally entangled qubit pairs: Alice measures
/// row `x` of the grid, Bob the transposed observables of column `y`. Returns the
/// strategy and its value 9.
pub fn magic_quantum() -> Result<(QuantumStrategy, f64)> {
    let grid = magic_grid();
    let alice = (0..3).map(|x| pair_measurement(&grid[x][0], &grid[x][1])).collect::<Result<Vec<_>>>()?;
    let bob = (0..3)
        .map(|y| pair_measurement(&grid[0][y].transpose(), &grid[1][y].transpose()))
        .collect::<Result<Vec<_>>>()?;
    let qs = QuantumStrategy::new(QuantumState::maximally_entangled(4), alice, bob)?;
    let f = magic();
    let value = f.evaluate(&strategy_distribution(f.scenario(), &qs)?)?;
    Ok((qs, value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DISTRIBUTION_TOL;

    #[test]
    fn chsh_value_and_table() {
        let (qs, value) = chsh_quantum().unwrap();
        assert!((value - (2.0 + 2f64.sqrt())).abs() < 1e-9);
        let dist = strategy_distribution(chsh().scenario(), &qs).unwrap();
        for x in 0..2 {
            for y in 0..2 {
                for a in 0..2 {
                    for b in 0..2 {
                        let sign = if (a ^ b) ^ (x & y) == 0 { 1.0 } else { -1.0 };
                        let want = (1.0 + sign * 2f64.sqrt() / 2.0) / 4.0;
                        assert!((dist.prob(a, b, x, y) - want).abs() < 1e-12);
                    }
                }
            }
        }
        dist.check_no_signalling(DISTRIBUTION_TOL).unwrap();
    }

    #[test]
    fn grid_products() {
        let g = magic_grid();
        let id = CMatrix::identity(4, 4);
        for r in 0..3 {
            let p = &g[r][0] * &g[r][1] * &g[r][2];
            assert!((p - &id).norm() < 1e-12);
        }
        for col in 0..3 {
            let p = &g[0][col] * &g[1][col] * &g[2][col];
            assert!((p + &id).norm() < 1e-12);
        }
    }

    #[test]
    fn magic_wins_always() {
        let (qs, value) = magic_quantum().unwrap();
        assert!((value - 9.0).abs() < 1e-9);
        let dist = strategy_distribution(magic().scenario(), &qs).unwrap();
        dist.check_no_signalling(DISTRIBUTION_TOL).unwrap();
    }
}

//! Quantum strategies: states, projective measurements, Born-rule distributions,
//! strategy libraries and Bell operators.

mod cglmp;
mod library;
mod operator;
mod strategy;
mod tsirelson;

pub use cglmp::{
    cglmp_measurements, cglmp_optimize_state, cglmp_quadratic_form, cglmp_strategy, cglmp_term_matrix, flatten_terms,
    product_value, CglmpPhases, CglmpStrategy,
};
pub use library::{chsh_quantum, magic_grid, magic_quantum, pauli_i, pauli_x, pauli_y, pauli_z, qubit_measurement};
pub use operator::{bell_operator, best_state, BellOperator, OPERATOR_LIMIT};
pub use strategy::{
    correlators, kron, strategy_distribution, CMatrix, Measurement, QuantumState, QuantumStrategy, STATE_TOL,
    STRATEGY_DOC_VERSION, UNITARY_TOL,
};
pub use tsirelson::{gamma_matrices, tsirelson_measurements, TSIRELSON_MAX_DIM};

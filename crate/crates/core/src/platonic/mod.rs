//! Correlation functionals built from unit-vector configurations.

mod onebit;
mod signbb;
mod vectors;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::model::CorrelationFunctional;

pub use onebit::{
    onebit_signsearch_lower, onebit_upper_sqrt2, sign_protocol_value, sqrt2_local_below, two_direction_upper,
    TwoDirectionEstimate,
};
pub use signbb::{sign_local_bound, sign_value};
pub use vectors::{e7_vectors, e8_roots_doubled, VectorConfiguration, E7_AXIS_DOUBLED};

/// Correlation functional `M_xy = V_x·V_y` of a semi-orthogonal configuration.
pub fn build_platonic(v: &VectorConfiguration) -> Result<CorrelationFunctional> {
    if !v.is_semi_orthogonal() {
        return Err(Error::Validation("vector configuration is not semi-orthogonal".into()));
    }
    Ok(CorrelationFunctional::from_factor(v))
}

/// Maximum quantum value `m²/n` of the Platonic functional.
pub fn plato_quantum_value(v: &VectorConfiguration) -> Ratio<i64> {
    Ratio::new((v.len() * v.len()) as i64, v.dim() as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e7_functional_shape() {
        let v = e7_vectors();
        let c = build_platonic(&v).unwrap();
        assert_eq!(c.inputs(), 63);
        assert!(c.is_symmetric());
        assert_eq!(c.trace(), Ratio::from_integer(63));
        assert!((0..63).all(|x| c.entry(x, x) == Ratio::from_integer(1)));
        assert_eq!(plato_quantum_value(&v), Ratio::from_integer(567));
    }

    #[test]
    fn trivial_quantum_values() {
        let one = VectorConfiguration::from_integers(&[vec![1]]).unwrap();
        assert_eq!(plato_quantum_value(&one), Ratio::from_integer(1));
        let basis = VectorConfiguration::from_integers(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(plato_quantum_value(&basis), Ratio::from_integer(3));
    }

    #[test]
    fn rejects_non_semi_orthogonal() {
        let v = VectorConfiguration::from_integers(&[vec![1, 0], vec![1, 0], vec![0, 1]]).unwrap();
        assert!(build_platonic(&v).is_err());
    }
}

//! Constructors for the single-copy games used throughout the toolkit.

use super::functional::BellFunctional;
use super::scenario::Scenario;
use crate::error::{Error, Result};

/// CHSH as a nonlocal game: `P(a=b|00) + P(a=b|01) + P(a=b|10) + P(a≠b|11)`.
pub fn chsh() -> BellFunctional {
    let s = Scenario::new(2, 2, 2, 2).expect("valid scenario");
    BellFunctional::from_fn(s, 1, |a, b, x, y| {
        let win = if x == 1 && y == 1 { a != b } else { a == b };
        i64::from(win)
    })
    .expect("chsh table")
    .with_name("chsh")
}

/// Alice's three row bits for output `a = 2·a0 + a1`; the third bit has even parity.
pub fn magic_row_bits(a: usize) -> [usize; 3] {
    let (a0, a1) = (a >> 1 & 1, a & 1);
    [a0, a1, a0 ^ a1]
}

/// Bob's three column bits for output `b = 2·b0 + b1`; the third bit has odd parity.
pub fn magic_column_bits(b: usize) -> [usize; 3] {
    let (b0, b1) = (b >> 1 & 1, b & 1);
    [b0, b1, 1 ^ b0 ^ b1]
}

/// Magic square game: Alice fills row `x`, Bob fills column `y`; they win when the
/// shared cell agrees, `a_y = b_x`.
pub fn magic() -> BellFunctional {
    let s = Scenario::new(3, 3, 4, 4).expect("valid scenario");
    BellFunctional::from_fn(s, 1, |a, b, x, y| i64::from(magic_row_bits(a)[y] == magic_column_bits(b)[x]))
        .expect("magic table")
        .with_name("magic")
}

/// `CGLMP_d = P(A0≥B0) + P(A0≤B1) + P(A1<B0) + P(A1≥B1)`, local bound 3.
pub fn cglmp(d: usize) -> Result<BellFunctional> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("CGLMP needs at least two outputs, got d = {d}")));
    }
    let s = Scenario::new(2, 2, d, d)?;
    Ok(BellFunctional::from_fn(s, 1, |a, b, x, y| i64::from(cglmp_event(x, y, a, b)))?.with_name(format!("cglmp{d}")))
}

/// Whether outcome pair `(a, b)` belongs to the CGLMP event of input pair `(x, y)`.
#[inline]
pub fn cglmp_event(x: usize, y: usize, a: usize, b: usize) -> bool {
    match (x, y) {
        (0, 0) => a >= b,
        (0, 1) => a <= b,
        (1, 0) => a < b,
        _ => a >= b,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::strategy::DeterministicStrategy;

    #[test]
    fn chsh_coefficients() {
        let f = chsh();
        assert_eq!(f.scenario(), Scenario::new(2, 2, 2, 2).unwrap());
        assert_eq!(f.coefficient(0, 0, 1, 1), 0);
        assert_eq!(f.coefficient(0, 1, 1, 1), 1);
        assert_eq!(f.coefficient(1, 1, 0, 1), 1);
        assert_eq!(f.total_weight(), 8);
    }

    #[test]
    fn chsh_all_ones_strategy_scores_three() {
        let s = DeterministicStrategy::new(vec![1, 1], vec![1, 1]);
        assert_eq!(chsh().evaluate_strategy(&s).unwrap(), 3);
    }

    #[test]
    fn chsh_algebraic_bound_is_four() {
        assert_eq!(chsh().algebraic_bound(), 4);
    }

    #[test]
    fn magic_parities() {
        for a in 0..4 {
            assert_eq!(magic_row_bits(a).iter().sum::<usize>() % 2, 0);
            assert_eq!(magic_column_bits(a).iter().sum::<usize>() % 2, 1);
        }
        let f = magic();
        assert_eq!(f.scenario(), Scenario::new(3, 3, 4, 4).unwrap());
        assert_eq!(f.algebraic_bound(), 9);
    }

    #[test]
    fn cglmp_rejects_small_d() {
        assert!(cglmp(1).is_err());
        assert!(cglmp(0).is_err());
    }

    #[test]
    fn cglmp_algebraic_bound_is_four() {
        for d in 2..6 {
            assert_eq!(cglmp(d).unwrap().algebraic_bound(), 4);
        }
    }
}

//! Combinatorial check behind the two-copy pseudo-telepathy argument: for every
//! bipartition of `{0..m-1}²`, one side meets every first coordinate (an `X_L`-type
//! set) or every second coordinate (an `X_R`-type set).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn side_contains_transversal(m: usize, member: impl Fn(usize, usize) -> bool) -> bool {
    let left = (0..m).all(|i| (0..m).any(|j| member(i, j)));
    let right = (0..m).all(|j| (0..m).any(|i| member(i, j)));
    left || right
}

fn holds_for(m: usize, set: &[bool]) -> bool {
    side_contains_transversal(m, |i, j| set[i * m + j]) || side_contains_transversal(m, |i, j| !set[i * m + j])
}

/// Exhaustive check over all `2^(m²)` bipartitions; `m ≤ 4`.
pub fn bipartition_lemma_check(m: usize) -> bool {
    assert!(m <= 4, "exhaustive lemma check supports m ≤ 4; use bipartition_lemma_sampled");
    if m <= 1 {
        return true;
    }
    let cells = m * m;
    let mut set = vec![false; cells];
    (0u64..1 << cells).all(|mask| {
        for (k, slot) in set.iter_mut().enumerate() {
            *slot = mask >> k & 1 == 1;
        }
        holds_for(m, &set)
    })
}

/// Randomized check over `samples` bipartitions for larger `m`.
pub fn bipartition_lemma_sampled(m: usize, samples: usize, seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut set = vec![false; m * m];
    (0..samples).all(|_| {
        set.iter_mut().for_each(|s| *s = rng.gen());
        holds_for(m, &set)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn holds_for_small_m() {
        assert!(bipartition_lemma_check(1));
        assert!(bipartition_lemma_check(2));
        assert!(bipartition_lemma_check(3));
        assert!(bipartition_lemma_check(4));
    }

    #[test]
    fn holds_on_samples() {
        assert!(bipartition_lemma_sampled(6, 20_000, 1));
    }

    #[test]
    fn transversal_detection() {
        // The diagonal meets every row and every column.
        let m = 3;
        let set: Vec<bool> = (0..9).map(|k| k / 3 == k % 3).collect();
        assert!(side_contains_transversal(m, |i, j| set[i * m + j]));
        // A single row meets every column but not every row.
        let row: Vec<bool> = (0..9).map(|k| k / 3 == 0).collect();
        assert!(side_contains_transversal(m, |i, j| row[i * m + j]));
        let empty = [false; 9];
        assert!(!side_contains_transversal(m, |i, j| empty[i * m + j]));
    }
}

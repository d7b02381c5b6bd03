use crate::error::{Error, Result};
use crate::model::BellFunctional;

/// Largest number of protocols the brute-force oracle will enumerate.
const ORACLE_LIMIT: u128 = 1 << 26;

/// One-bit bound (Alice sends) by enumerating every message function, every
/// sender strategy and every pair of responder strategies. Independent of the
/// partition formula; meant for tiny scenarios only.
pub fn onebit_bruteforce_oracle(f: &BellFunctional) -> Result<i64> {
    let s = f.scenario();
    let (ma, mb, oa, ob) = (s.inputs_a as u32, s.inputs_b as u32, s.outputs_a as u128, s.outputs_b as u128);
    let responder_maps = ob.checked_pow(mb).unwrap_or(u128::MAX);
    let count = (1u128 << ma)
        .saturating_mul(oa.checked_pow(ma).unwrap_or(u128::MAX))
        .saturating_mul(responder_maps.saturating_mul(responder_maps));
    if count > ORACLE_LIMIT {
        return Err(Error::TooLarge(format!("{count} protocols for scenario {s}")));
    }
    let digits = |mut code: u128, base: u128, len: u32| -> Vec<usize> {
        (0..len)
            .map(|_| {
                let d = (code % base) as usize;
                code /= base;
                d
            })
            .collect()
    };
    let mut best = i64::MIN;
    for message in 0..1u128 << ma {
        let l = digits(message, 2, ma);
        for sender_code in 0..oa.pow(ma) {
            let alice = digits(sender_code, oa, ma);
            for r0 in 0..responder_maps {
                let bob0 = digits(r0, ob, mb);
                for r1 in 0..responder_maps {
                    let bob1 = digits(r1, ob, mb);
                    let mut total = 0;
                    for x in 0..ma as usize {
                        let bob = if l[x] == 0 { &bob0 } else { &bob1 };
                        for y in 0..mb as usize {
                            total += f.coefficient(alice[x], bob[y], x, y);
                        }
                    }
                    best = best.max(total);
                }
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{chsh, magic};

    #[test]
    fn chsh_oracle_is_four() {
        assert_eq!(onebit_bruteforce_oracle(&chsh()).unwrap(), 4);
    }

    #[test]
    fn magic_oracle_is_nine() {
        assert_eq!(onebit_bruteforce_oracle(&magic()).unwrap(), 9);
    }

    #[test]
    fn size_guard() {
        assert!(onebit_bruteforce_oracle(&magic().tensor(&chsh())).is_err());
    }
}

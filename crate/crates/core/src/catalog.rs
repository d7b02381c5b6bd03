//! Named functionals: `chsh`, `chsh<n>`, `magic`, `magic<n>`, `magic2s`, `magic2a`,
//! `cglmp<d>`, `cglmp<d>x<n>`, `cglmp<d>x2s`, `cglmp<d>x2a`, `cglmp<d>x<l>t`, `platoE7`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{cglmp, chsh, magic, BellFunctional, CorrelationFunctional, Distribution};
use crate::platonic::{build_platonic, e7_vectors};
use crate::quantum::{
    cglmp_optimize_state, cglmp_strategy, chsh_quantum, magic_quantum, strategy_distribution, tsirelson_measurements,
};

/// Example names, one per family.
pub const EXAMPLES: &[&str] = &[
    "chsh",
    "chsh4",
    "magic",
    "magic2",
    "magic2s",
    "magic2a",
    "cglmp3",
    "cglmp8x2",
    "cglmp283x2s",
    "cglmp38x2a",
    "cglmp2x4t",
    "platoE7",
];

/// `[Magic^⊗2]_s`: both parties drop inputs 21 and 22.
pub const MAGIC2S_KEEP: [usize; 7] = [0, 1, 2, 3, 4, 5, 6];

/// `[Magic^⊗2]_a`: Alice keeps 00..20, Bob keeps 00, 11, 22.
pub const MAGIC2A_KEEP_X: [usize; 7] = [0, 1, 2, 3, 4, 5, 6];
pub const MAGIC2A_KEEP_Y: [usize; 3] = [0, 4, 8];

/// Two-copy CGLMP truncations: 00, 01, 11 (and 00, 11 for Bob in the asymmetric one).
pub const CGLMP2S_KEEP: [usize; 3] = [0, 1, 3];
pub const CGLMP2A_KEEP_Y: [usize; 2] = [0, 3];

/// The `l + 1` inputs `0…00, 0…01, 0…11, …, 1…11` of `l` binary-input copies.
pub fn staircase_inputs(copies: usize) -> Vec<usize> {
    (0..=copies).map(|ones| (1usize << ones) - 1).collect()
}

/// Correlation form of the E7 Platonic functional.
pub fn plato_e7() -> CorrelationFunctional {
    build_platonic(&e7_vectors()).expect("E7 roots are semi-orthogonal")
}

fn number(text: &str, what: &str, name: &str) -> Result<usize> {
    text.parse::<usize>().map_err(|_| unknown(name, &format!("bad {what} {text:?}")))
}

fn unknown(name: &str, why: &str) -> Error {
    Error::InvalidArgument(format!("unknown functional {name:?}: {why}; examples: {}", EXAMPLES.join(", ")))
}

/// Builds a functional by registry name.
pub fn build(name: &str) -> Result<BellFunctional> {
    let f = build_unnamed(name)?;
    Ok(f.with_name(name))
}

fn build_unnamed(name: &str) -> Result<BellFunctional> {
    let lower = name.to_ascii_lowercase();
    if lower == "platoe7" {
        return Ok(plato_e7().to_probability()?.functional);
    }
    if let Some(rest) = lower.strip_prefix("chsh") {
        return if rest.is_empty() { Ok(chsh()) } else { chsh().tensor_power(number(rest, "copy count", name)?) };
    }
    if let Some(rest) = lower.strip_prefix("magic") {
        let square = magic();
        return match rest {
            "" => Ok(square),
            "2s" => square.tensor_power(2)?.truncate(&MAGIC2S_KEEP, &MAGIC2S_KEEP),
            "2a" => square.tensor_power(2)?.truncate(&MAGIC2A_KEEP_X, &MAGIC2A_KEEP_Y),
            n => square.tensor_power(number(n, "copy count", name)?),
        };
    }
    if let Some(rest) = lower.strip_prefix("cglmp") {
        let (d, suffix) = match rest.split_once('x') {
            Some((d, s)) => (d, Some(s)),
            None => (rest, None),
        };
        let single = cglmp(number(d, "dimension", name)?)?;
        return match suffix {
            None => Ok(single),
            Some("2s") => single.tensor_power(2)?.truncate(&CGLMP2S_KEEP, &CGLMP2S_KEEP),
            Some("2a") => single.tensor_power(2)?.truncate(&CGLMP2S_KEEP, &CGLMP2A_KEEP_Y),
            Some(s) if s.ends_with('t') => {
                let copies = number(&s[..s.len() - 1], "copy count", name)?;
                if copies == 0 || copies > 16 {
                    return Err(unknown(name, "staircase truncation needs 1 to 16 copies"));
                }
                let keep = staircase_inputs(copies);
                single.tensor_power(copies)?.truncate(&keep, &keep)
            }
            Some(s) => single.tensor_power(number(s, "copy count", name)?),
        };
    }
    Err(unknown(name, "no matching family"))
}

/// Quantum value reached by the library strategy for a registry functional.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantumValue {
    pub value: f64,
    /// Which strategy produced the value.
    pub strategy: String,
    /// True when the value is known to equal the maximum over all quantum strategies;
    /// otherwise it is a lower bound.
    pub optimal: bool,
}

/// Per-copy distribution of the library strategy for a family's single-copy functional.
fn single_copy_strategy(lower: &str) -> Result<(Distribution, String, bool)> {
    if lower.starts_with("chsh") {
        let (qs, _) = chsh_quantum()?;
        return Ok((strategy_distribution(chsh().scenario(), &qs)?, "optimal qubit strategy".into(), true));
    }
    if lower.starts_with("magic") {
        let (qs, _) = magic_quantum()?;
        return Ok((
            strategy_distribution(magic().scenario(), &qs)?,
            "observable grid on two qubit pairs".into(),
            true,
        ));
    }
    if let Some(rest) = lower.strip_prefix("cglmp") {
        let d: usize =
            rest.split('x').next().unwrap_or_default().parse().map_err(|_| unknown(lower, "bad dimension"))?;
        let (schmidt, _) = cglmp_optimize_state(d)?;
        let dist = cglmp_strategy(d, &schmidt)?.distribution()?;
        // Optimal only for d = 2, where the functional is equivalent to CHSH.
        return Ok((dist, format!("Fourier measurements, optimized Schmidt vector (d = {d})"), d == 2));
    }
    Err(unknown(lower, "no library strategy"))
}

/// Evaluates the library quantum strategy on `name`: the single-copy strategy played
/// independently on every copy (restricted to kept inputs for truncations). For
/// `platoE7` the value is on the probability form returned by [`build`].
pub fn quantum_value(name: &str) -> Result<QuantumValue> {
    let lower = name.to_ascii_lowercase();
    let f = build(name)?;
    if lower == "platoe7" {
        let qs = tsirelson_measurements(&e7_vectors())?;
        let value = f.evaluate(&strategy_distribution(f.scenario(), &qs)?)?;
        return Ok(QuantumValue {
            value,
            strategy: "anticommuting observables, maximally entangled state".into(),
            optimal: true,
        });
    }
    let (dist, strategy, single_optimal) = single_copy_strategy(&lower)?;
    let (value, strategy, optimal) = match f.product_factors() {
        Some((leaves, keep)) if leaves.len() > 1 => {
            let value = f.evaluate_product(&vec![dist; leaves.len()])?;
            // Parallel repetition is optimal for the untruncated CHSH powers (an XOR game).
            (value, format!("product of: {strategy}"), lower.starts_with("chsh") && keep.is_none())
        }
        _ => (f.evaluate(&dist)?, strategy, single_optimal),
    };
    let algebraic = f.algebraic_bound() as f64 / f.denominator() as f64;
    Ok(QuantumValue { value, strategy, optimal: optimal || (value - algebraic).abs() < 1e-9 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Scenario;

    fn scenario(name: &str) -> Scenario {
        build(name).unwrap().scenario()
    }

    #[test]
    fn registry_scenarios() {
        assert_eq!(scenario("chsh"), Scenario::new(2, 2, 2, 2).unwrap());
        assert_eq!(scenario("chsh4"), Scenario::new(16, 16, 16, 16).unwrap());
        assert_eq!(scenario("magic2"), Scenario::new(9, 9, 16, 16).unwrap());
        assert_eq!(scenario("magic2s"), Scenario::new(7, 7, 16, 16).unwrap());
        assert_eq!(scenario("magic2a"), Scenario::new(7, 3, 16, 16).unwrap());
        assert_eq!(scenario("cglmp38x2a"), Scenario::new(3, 2, 1444, 1444).unwrap());
        assert_eq!(scenario("cglmp283x2s"), Scenario::new(3, 3, 80089, 80089).unwrap());
        assert_eq!(scenario("cglmp2x4t"), Scenario::new(5, 5, 16, 16).unwrap());
        assert_eq!(scenario("platoE7"), Scenario::new(63, 63, 2, 2).unwrap());
    }

    #[test]
    fn truncation_labels_follow_digit_strings() {
        let f = build("magic2a").unwrap();
        assert_eq!(f.input_labels_b(), ["00", "11", "22"]);
        assert_eq!(f.input_labels_a().last().unwrap(), "20");
        let f = build("cglmp2x4t").unwrap();
        assert_eq!(f.input_labels_a(), ["0000", "0001", "0011", "0111", "1111"]);
    }

    #[test]
    fn algebraic_bounds() {
        assert_eq!(build("magic2s").unwrap().algebraic_bound(), 49);
        assert_eq!(build("cglmp5x2s").unwrap().algebraic_bound(), 9);
        assert_eq!(build("magic2").unwrap().algebraic_bound(), 81);
    }

    #[test]
    fn quantum_values_of_registry_names() {
        let cases =
            [("chsh", 2.0 + 2f64.sqrt()), ("magic2", 81.0), ("magic2s", 49.0), ("magic2a", 21.0), ("cglmp2", 3.2071)];
        for (name, want) in cases {
            let q = quantum_value(name).unwrap();
            assert!((q.value - want).abs() < 1e-4, "{name}: {}", q.value);
        }
        assert!((quantum_value("chsh4").unwrap().value - (2.0 + 2f64.sqrt()).powi(4)).abs() < 1e-9);
        assert!(quantum_value("chsh4").unwrap().optimal);
        assert!(quantum_value("magic2s").unwrap().optimal);
        assert!(!quantum_value("cglmp8x2").unwrap().optimal);
        let plato = quantum_value("platoE7").unwrap().value;
        let offset = plato_e7().to_probability().unwrap().offset;
        assert!((plato - *offset.numer() as f64 / *offset.denom() as f64 - 567.0).abs() < 1e-6);
    }

    #[test]
    fn unknown_names_rejected() {
        for bad in ["", "foo", "chshx", "cglmp1", "magic2q", "cglmp3x0t"] {
            assert!(build(bad).is_err(), "{bad}");
        }
    }
}

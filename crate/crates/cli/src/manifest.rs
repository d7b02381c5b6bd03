//! Reference-value tables as job lists.
//!
//! Every job names a functional, the quantity to compute and the expected value with
//! its relation and tolerance. Exact rows are compared with zero tolerance; rows whose
//! reference is only a see-saw lower bound use `Ge`.

use serde::Serialize;

use crate::args::TableName;

/// Restarts and seed of every see-saw job.
pub const HEURISTIC_RESTARTS: usize = 1000;
pub const HEURISTIC_SEED: u64 = 1;

/// One-bit direction of an exact job.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sender {
    Ab,
    Ba,
    /// Larger of the two directions.
    Bi,
}

/// Two-copy truncation of a CGLMP product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CglmpCut {
    Symmetric,
    Asymmetric,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Quantity {
    /// Exact local bound.
    Local,
    /// Exact one-bit bound.
    Onebit { sender: Sender },
    /// See-saw lower bound on the local bound.
    SeesawLocal { restarts: usize, seed: u64 },
    /// See-saw lower bound on the one-bit bound (Alice sends).
    SeesawOnebit { restarts: usize, seed: u64 },
    /// Value of the library quantum strategy.
    Quantum,
    /// CGLMP_d Fourier strategy with the optimized Schmidt vector, on `copies` copies.
    CglmpQuantum { d: usize, copies: usize, cut: Option<CglmpCut> },
    /// Number of probabilities `m_A m_B o_A o_B`.
    ProbabilityDimension,
    /// Exact local bound of the E7 correlation form.
    PlatoLocal,
    /// Upper bound `√2·L` on the one-bit bound of the E7 correlation form.
    PlatoOnebitUpper,
    /// Quantum value of the E7 correlation form.
    PlatoQuantum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Eq,
    Ge,
    Lt,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Ge => ">=",
            Relation::Lt => "<",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Expected {
    pub relation: Relation,
    pub value: f64,
    pub tolerance: f64,
}

/// How a reference value is established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    /// Complete search.
    Exact,
    /// Best value found by a seeded multistart search.
    Heuristic,
    /// Closed-form bound.
    Analytic,
    /// Floating-point optimization.
    Numerical,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Job {
    pub id: String,
    pub table: &'static str,
    pub functional: String,
    pub quantity: Quantity,
    pub expected: Expected,
    pub source: Source,
}

fn expect(relation: Relation, value: f64, tolerance: f64) -> Expected {
    Expected { relation, value, tolerance }
}

fn job(
    table: &'static str,
    functional: &str,
    label: &str,
    quantity: Quantity,
    expected: Expected,
    source: Source,
) -> Job {
    Job {
        id: format!("{table}/{functional}/{label}"),
        table,
        functional: functional.to_string(),
        quantity,
        expected,
        source,
    }
}

fn exact(table: &'static str, functional: &str, label: &str, quantity: Quantity, value: f64) -> Job {
    job(table, functional, label, quantity, expect(Relation::Eq, value, 0.0), Source::Exact)
}

fn at_least(table: &'static str, functional: &str, label: &str, quantity: Quantity, value: f64) -> Job {
    job(table, functional, label, quantity, expect(Relation::Ge, value, 0.0), Source::Heuristic)
}

fn numerical(
    table: &'static str,
    functional: &str,
    label: &str,
    quantity: Quantity,
    value: f64,
    tolerance: f64,
) -> Job {
    job(table, functional, label, quantity, expect(Relation::Eq, value, tolerance), Source::Numerical)
}

fn dimension(table: &'static str, functional: &str, value: f64) -> Job {
    job(table, functional, "dp", Quantity::ProbabilityDimension, expect(Relation::Eq, value, 0.0), Source::Analytic)
}

const SEESAW_LOCAL: Quantity = Quantity::SeesawLocal { restarts: HEURISTIC_RESTARTS, seed: HEURISTIC_SEED };
const SEESAW_ONEBIT: Quantity = Quantity::SeesawOnebit { restarts: HEURISTIC_RESTARTS, seed: HEURISTIC_SEED };
const ONEBIT: Quantity = Quantity::Onebit { sender: Sender::Bi };

/// Largest-gap instances: one-bit bound, quantum value and number of probabilities.
pub fn table1() -> Vec<Job> {
    let t = "table1";
    let cglmp = |d, cut| Quantity::CglmpQuantum { d, copies: 2, cut };
    vec![
        at_least(t, "chsh4", "onebit", SEESAW_ONEBIT, 132.0),
        numerical(t, "chsh4", "quantum", Quantity::Quantum, 135.8822, 1e-4),
        dimension(t, "chsh4", 65536.0),
        exact(t, "magic2", "onebit", ONEBIT, 75.0),
        numerical(t, "magic2", "quantum", Quantity::Quantum, 81.0, 1e-9),
        dimension(t, "magic2", 20736.0),
        exact(t, "magic2s", "onebit", ONEBIT, 48.0),
        numerical(t, "magic2s", "quantum", Quantity::Quantum, 49.0, 1e-9),
        dimension(t, "magic2s", 12544.0),
        exact(t, "cglmp8x2", "onebit", ONEBIT, 12.0),
        numerical(t, "cglmp8x2", "quantum", cglmp(8, None), 12.1230, 1e-4),
        dimension(t, "cglmp8x2", 65536.0),
        numerical(t, "cglmp283x2s", "quantum", cglmp(283, Some(CglmpCut::Symmetric)), 8.0002059, 1e-6),
        dimension(t, "cglmp283x2s", 57728231289.0),
        exact(t, "magic2a", "onebit-ab", Quantity::Onebit { sender: Sender::Ab }, 20.0),
        numerical(t, "magic2a", "quantum", Quantity::Quantum, 21.0, 1e-9),
        dimension(t, "magic2a", 5376.0),
        exact(t, "cglmp38x2a", "onebit-ab", Quantity::Onebit { sender: Sender::Ab }, 5.0),
        numerical(t, "cglmp38x2a", "quantum", cglmp(38, Some(CglmpCut::Asymmetric)), 5.0005456, 1e-6),
        dimension(t, "cglmp38x2a", 12510816.0),
        exact(t, "platoE7", "local", Quantity::PlatoLocal, 399.0),
        job(
            t,
            "platoE7",
            "onebit-upper",
            Quantity::PlatoOnebitUpper,
            expect(Relation::Lt, 565.0, 0.0),
            Source::Analytic,
        ),
        numerical(t, "platoE7", "quantum", Quantity::PlatoQuantum, 567.0, 1e-6),
        dimension(t, "platoE7", 15876.0),
    ]
}

/// CHSH tensor powers, n = 1..=max_n (at most 6).
pub fn table2(max_n: usize) -> Vec<Job> {
    let t = "table2";
    let local = [3.0, 10.0, 31.0, 100.0, 310.0, 1000.0];
    let onebit = [4.0, 16.0, 40.0, 132.0, 408.0, 1332.0];
    let mut jobs = Vec::new();
    for n in 1..=max_n.min(6) {
        let name = format!("chsh{n}");
        if n <= 3 {
            jobs.push(exact(t, &name, "local", Quantity::Local, local[n - 1]));
            jobs.push(exact(t, &name, "onebit", ONEBIT, onebit[n - 1]));
        } else {
            jobs.push(at_least(t, &name, "local", SEESAW_LOCAL, local[n - 1]));
            jobs.push(at_least(t, &name, "onebit", SEESAW_ONEBIT, onebit[n - 1]));
        }
        let q = (2.0 + 2f64.sqrt()).powi(n as i32);
        jobs.push(numerical(t, &name, "quantum", Quantity::Quantum, q, 1e-5));
    }
    jobs
}

/// Magic square tensor powers, n = 1..=max_n (at most 3).
pub fn table3(max_n: usize) -> Vec<Job> {
    let t = "table3";
    let local = [8.0, 66.0, 528.0];
    let onebit = [9.0, 75.0, 621.0];
    let mut jobs = Vec::new();
    for n in 1..=max_n.min(3) {
        let name = if n == 1 { "magic".to_string() } else { format!("magic{n}") };
        if n <= 2 {
            jobs.push(exact(t, &name, "local", Quantity::Local, local[n - 1]));
            jobs.push(exact(t, &name, "onebit", ONEBIT, onebit[n - 1]));
        } else {
            jobs.push(at_least(t, &name, "local", SEESAW_LOCAL, local[n - 1]));
            jobs.push(at_least(t, &name, "onebit", SEESAW_ONEBIT, onebit[n - 1]));
        }
        jobs.push(numerical(t, &name, "quantum", Quantity::Quantum, 9f64.powi(n as i32), 1e-9));
    }
    jobs
}

/// Single-copy CGLMP quantum values for d = 2..=10.
pub const CGLMP_QUANTUM: [f64; 9] = [3.2071, 3.3050, 3.3648, 3.4063, 3.4374, 3.4618, 3.4818, 3.4985, 3.5128];

/// Two-copy product values for d = 2..=10.
pub const CGLMP_SQUARED: [f64; 9] = [10.2855, 10.9227, 11.3216, 11.6028, 11.8155, 11.9844, 12.1230, 12.2397, 12.3399];

/// CGLMP_d and two copies, d = 2..=max_n (at most 10).
pub fn table4(max_n: usize) -> Vec<Job> {
    let t = "table4";
    let mut jobs = Vec::new();
    for d in 2..=max_n.min(10) {
        let single = format!("cglmp{d}");
        let double = format!("cglmp{d}x2");
        let q1 = Quantity::CglmpQuantum { d, copies: 1, cut: None };
        let q2 = Quantity::CglmpQuantum { d, copies: 2, cut: None };
        jobs.push(numerical(t, &single, "quantum", q1, CGLMP_QUANTUM[d - 2], 1e-4));
        jobs.push(numerical(t, &double, "quantum", q2, CGLMP_SQUARED[d - 2], 1e-4));
        jobs.push(exact(t, &double, "local", Quantity::Local, 10.0));
        jobs.push(exact(t, &double, "onebit", ONEBIT, 12.0));
    }
    jobs
}

/// Default row limit of a table: copies for tables 2 and 3, dimension for table 4.
pub fn default_max_n(table: TableName) -> usize {
    match table {
        TableName::Table2 => 3,
        TableName::Table3 => 2,
        TableName::Table4 => 4,
        TableName::Table1 | TableName::All => 0,
    }
}

/// Jobs of `table`; `max_n` overrides the default row limit of the tables that have one.
pub fn jobs(table: TableName, max_n: Option<usize>) -> Vec<Job> {
    let limit = |t| max_n.unwrap_or_else(|| default_max_n(t));
    match table {
        TableName::Table1 => table1(),
        TableName::Table2 => table2(limit(TableName::Table2)),
        TableName::Table3 => table3(limit(TableName::Table3)),
        TableName::Table4 => table4(limit(TableName::Table4)),
        TableName::All => [TableName::Table1, TableName::Table2, TableName::Table3, TableName::Table4]
            .into_iter()
            .flat_map(|t| jobs(t, max_n))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn ids_are_unique() {
        let all = jobs(TableName::All, Some(10));
        let ids: BTreeSet<_> = all.iter().map(|j| j.id.as_str()).collect();
        assert_eq!(ids.len(), all.len());
    }

    #[test]
    fn row_limits_cap() {
        assert_eq!(table2(99).len(), 18);
        assert_eq!(table3(99).len(), 9);
        assert_eq!(table4(99).len(), 36);
        assert!(table4(1).is_empty());
    }

    #[test]
    fn chsh_quantum_values_follow_powers() {
        let q: Vec<f64> =
            table2(6).iter().filter(|j| j.quantity == Quantity::Quantum).map(|j| j.expected.value).collect();
        for (want, got) in [3.41421, 11.65685, 39.79898, 135.88225, 463.93102, 1583.95959].iter().zip(q) {
            assert!((want - got).abs() < 1e-5);
        }
    }
}

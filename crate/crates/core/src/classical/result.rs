use std::time::Duration;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::model::{DeterministicStrategy, MessageProtocol};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Exact,
    Lower,
    Upper,
}

/// Witness attached to a bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Certificate {
    None,
    Strategy(DeterministicStrategy),
    Protocol(MessageProtocol),
    /// ±1 assignments of a correlation expression.
    Signs {
        alice: Vec<i8>,
        bob: Vec<i8>,
    },
    /// One-bit protocol on ±1 outcomes: `alice_message[x]` selects Bob's sign vector.
    SignProtocol {
        alice: Vec<i8>,
        alice_message: Vec<u8>,
        bob: [Vec<i8>; 2],
    },
}

/// Outcome of a bound computation.
///
/// `value` is on the functional's internal integer scale; `denominator` converts it to
/// the user scale.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub value: i64,
    pub denominator: i64,
    pub kind: BoundKind,
    pub method: String,
    pub certificate: Certificate,
    pub elapsed: f64,
    pub nodes: u64,
}

impl BoundResult {
    pub(crate) fn new(value: i64, denominator: i64, kind: BoundKind, method: impl Into<String>) -> Self {
        Self { value, denominator, kind, method: method.into(), certificate: Certificate::None, elapsed: 0.0, nodes: 0 }
    }

    pub(crate) fn with_certificate(mut self, certificate: Certificate) -> Self {
        self.certificate = certificate;
        self
    }

    pub(crate) fn with_stats(mut self, elapsed: Duration, nodes: u64) -> Self {
        self.elapsed = elapsed.as_secs_f64();
        self.nodes = nodes;
        self
    }

    pub fn user_value(&self) -> Ratio<i64> {
        Ratio::new(self.value, self.denominator)
    }

    pub fn as_f64(&self) -> f64 {
        self.value as f64 / self.denominator as f64
    }

    pub fn is_exact(&self) -> bool {
        self.kind == BoundKind::Exact
    }
}

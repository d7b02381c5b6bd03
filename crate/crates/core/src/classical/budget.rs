use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

/// Limits on an exact search. Exhausting either limit downgrades the result to a
/// lower bound carrying the best certificate found so far.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub time_limit: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn nodes(max_nodes: u64) -> Self {
        Self { max_nodes: Some(max_nodes), time_limit: None }
    }

    pub fn time(limit: Duration) -> Self {
        Self { max_nodes: None, time_limit: Some(limit) }
    }
}

/// Shared node counter and abort flag for one search.
pub(crate) struct Meter {
    budget: Budget,
    start: Instant,
    nodes: AtomicU64,
    aborted: AtomicBool,
}

impl Meter {
    pub(crate) fn new(budget: Budget) -> Self {
        Self { budget, start: Instant::now(), nodes: AtomicU64::new(0), aborted: AtomicBool::new(false) }
    }

    /// Adds a batch of visited nodes; returns false once the budget is exhausted.
    pub(crate) fn charge(&self, batch: u64) -> bool {
        let total = self.nodes.fetch_add(batch, Ordering::Relaxed) + batch;
        if self.budget.max_nodes.is_some_and(|max| total > max)
            || self.budget.time_limit.is_some_and(|limit| self.start.elapsed() > limit)
        {
            self.aborted.store(true, Ordering::Relaxed);
        }
        !self.is_aborted()
    }

    pub(crate) fn is_aborted(&self) -> bool {
        self.aborted.load(Ordering::Relaxed)
    }

    pub(crate) fn nodes(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed)
    }

    pub(crate) fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }
}

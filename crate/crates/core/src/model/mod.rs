//! Scenarios, Bell functionals and their algebra, distributions and strategies.

mod builders;
mod correlation;
mod distribution;
mod functional;
mod scenario;
mod strategy;

pub use builders::{cglmp, cglmp_event, chsh, magic, magic_column_bits, magic_row_bits};
pub(crate) use correlation::lcm;
pub use correlation::{CorrelationFunctional, ProbabilityForm};
pub use distribution::{Copy, Distribution, DISTRIBUTION_TOL};
pub use functional::{BellFunctional, KeptInputs, Repr, DENSE_LIMIT, FUNCTIONAL_DOC_VERSION};
pub use scenario::Scenario;
pub use strategy::{DeterministicStrategy, Direction, MessageProtocol};

//! Bell functionals, their classical (local, one-bit, c-bit) bounds, quantum
//! strategies, Platonic correlation functionals and see-saw heuristics.

// Index loops mirror the subscripts of the formulas they implement.
#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod classical;
pub mod error;
pub mod heuristics;
pub mod model;
pub mod platonic;
pub mod quantum;

pub use error::{Error, Result};
pub use model::{BellFunctional, Distribution, Scenario};

//! Simulation and analysis of the open Michaelis-Menten mechanism: exact and
//! reduced Gillespie simulation, linear-noise variances, deterministic QSS
//! reductions and their derivation by slow-manifold projection.

pub mod deterministic;
pub mod error;
pub mod fenichel;
pub mod lna;
pub mod model;
pub mod rng;
pub mod ssa;

pub use error::{Error, Result};
pub use model::{Parameters, Thresholds};

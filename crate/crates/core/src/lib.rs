// SPDX-License-Identifier: Apache-2.0

//! Random intersection graph laboratory.
//!
//! * [`rig`]: graphs, object assignments and seeded samplers for the binomial,
//!   uniform and general random intersection graph models (plus Erdős–Rényi).
//! * [`props`]: exact minimum-degree, k-connectivity and k-robustness checks.
//! * [`asymptotics`]: scaling conditions, deviation terms and limit probabilities.
//! * [`coupling`]: nested samplers and bracket parameters relating the models.
//! * [`consensus`]: trimmed-mean resilient consensus with local adversaries.
//! * [`harness`]: seeded, worker-count-invariant Monte Carlo sweeps.

pub mod asymptotics;
pub mod consensus;
pub mod coupling;
mod error;
pub mod harness;
pub mod props;
pub mod rig;

pub use error::{Error, Result};
pub use rig::{Graph, Model, ModelKind, ObjectAssignment, Seed, SizeDistribution};

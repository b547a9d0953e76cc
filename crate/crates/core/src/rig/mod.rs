// SPDX-License-Identifier: Apache-2.0

//! Graphs, object assignments and seeded samplers.

mod assignment;
mod distribution;
mod graph;
mod sample;
mod seed;

pub use assignment::{graph_from_assignment, ObjectAssignment};
pub use distribution::SizeDistribution;
pub use graph::{Graph, DEFAULT_BIT_ROW_CAP};
pub use sample::{
    sample_binomial_rig, sample_er, sample_general_rig, sample_uniform_rig, Model, ModelKind,
};
pub use seed::Seed;

pub(crate) use assignment::graph_from_sets;
pub(crate) use sample::shuffled_subset;

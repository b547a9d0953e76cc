// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use super::graph::{Graph, DEFAULT_BIT_ROW_CAP};
use crate::{Error, Result};

/// Per-node object sets drawn from the pool `{0, .., pool - 1}`.
///
/// Serialized as `{"P": pool, "sets": [[..], ..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawAssignment", into = "RawAssignment")]
pub struct ObjectAssignment {
    pool: usize,
    sets: Vec<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct RawAssignment {
    #[serde(rename = "P")]
    pool: usize,
    sets: Vec<Vec<u32>>,
}

impl TryFrom<RawAssignment> for ObjectAssignment {
    type Error = Error;

    fn try_from(raw: RawAssignment) -> Result<Self> {
        ObjectAssignment::new(raw.pool, raw.sets)
    }
}

impl From<ObjectAssignment> for RawAssignment {
    fn from(a: ObjectAssignment) -> Self {
        RawAssignment {
            pool: a.pool,
            sets: a.sets,
        }
    }
}

impl ObjectAssignment {
    /// Validates and normalizes (sorts) the sets. Duplicate objects within a
    /// set and objects outside the pool are errors.
    pub fn new(pool: usize, mut sets: Vec<Vec<u32>>) -> Result<Self> {
        if pool == 0 {
            return Err(Error::param("object pool size must be at least 1"));
        }
        for (i, set) in sets.iter_mut().enumerate() {
            set.sort_unstable();
            if set.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidInput(format!(
                    "set {i} has a repeated object"
                )));
            }
            if let Some(&last) = set.last() {
                if last as usize >= pool {
                    return Err(Error::InvalidInput(format!(
                        "set {i} contains object {last} outside pool of size {pool}"
                    )));
                }
            }
        }
        Ok(ObjectAssignment { pool, sets })
    }

    /// Caller guarantees every set is sorted, duplicate-free and inside the pool.
    pub(crate) fn from_sorted_unchecked(pool: usize, sets: Vec<Vec<u32>>) -> Self {
        debug_assert!(sets.iter().all(|s| s.windows(2).all(|w| w[0] < w[1])
            && s.last().is_none_or(|&x| (x as usize) < pool)));
        ObjectAssignment { pool, sets }
    }

    pub fn pool(&self) -> usize {
        self.pool
    }

    pub fn node_count(&self) -> usize {
        self.sets.len()
    }

    pub fn sets(&self) -> &[Vec<u32>] {
        &self.sets
    }

    pub fn set(&self, i: usize) -> &[u32] {
        &self.sets[i]
    }

    /// Intersection graph built from an object -> holders index: every object
    /// contributes a clique on the nodes holding it.
    pub fn graph(&self) -> Graph {
        graph_from_assignment(self)
    }

    /// Reference construction by testing every pair of sets for intersection.
    pub fn graph_pairwise(&self) -> Graph {
        let n = self.sets.len();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if sorted_intersect(&self.sets[i], &self.sets[j]) {
                    edges.push((i, j));
                }
            }
        }
        Graph::from_edges(n, edges).expect("pairwise edges are in range")
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn sorted_intersect(a: &[u32], b: &[u32]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// Edge `(i, j)` exactly when `S_i` and `S_j` share an object.
pub fn graph_from_assignment(assignment: &ObjectAssignment) -> Graph {
    graph_from_sets(&assignment.sets)
}

pub(crate) fn graph_from_sets(sets: &[Vec<u32>]) -> Graph {
    let n = sets.len();
    // (object, holder) pairs sorted by object give the inverted index without
    // allocating anything proportional to the pool size.
    let mut pairs: Vec<u64> = sets
        .iter()
        .enumerate()
        .flat_map(|(i, s)| s.iter().map(move |&o| (u64::from(o) << 32) | i as u64))
        .collect();
    pairs.sort_unstable();
    let holders: Vec<u32> = pairs.iter().map(|&x| x as u32).collect();
    let mut groups: Vec<&[u32]> = Vec::new();
    let mut start = 0;
    for end in 1..=pairs.len() {
        if end == pairs.len() || pairs[end] >> 32 != pairs[start] >> 32 {
            if end - start > 1 {
                groups.push(&holders[start..end]);
            }
            start = end;
        }
    }
    Graph::from_cliques(n, groups, DEFAULT_BIT_ROW_CAP)
}

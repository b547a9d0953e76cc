// SPDX-License-Identifier: Apache-2.0

//! k-robustness.
//!
//! For a node set `S` let `reach(S)` be the largest number of neighbors
//! outside `S` held by any member of `S`. A pair of disjoint nonempty sets
//! `(A, B)` defeats k-robustness exactly when `reach(A) < k` and
//! `reach(B) < k`, so
//!
//! ```text
//! robustness(G) = min over disjoint nonempty (A, B) of max(reach(A), reach(B)).
//! ```
//!
//! The exact checker tabulates `reach` over all `2^n` subsets and a
//! subset-minimum transform `best(M) = min { reach(S) : ∅ ≠ S ⊆ M }`, then
//! scans `A` against `best(V \ A)`. That is `O(2^n n)` time and covers every
//! ternary assignment of nodes to `{A, B, neither}` without enumerating them.
//!
//! Above the exhaustive cap only the one-sided [`robustness_screen`] is
//! available.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::connectivity::is_k_connected;
use super::min_degree;
use crate::rig::{Graph, Seed};
use crate::{Error, Result};

pub const DEFAULT_EXHAUSTIVE_CAP: usize = 16;
/// Hard ceiling for the subset tables (`2^24` entries).
pub const MAX_EXHAUSTIVE_CAP: usize = 24;

/// A pair of disjoint nonempty node sets, each of whose members has fewer
/// than `k` neighbors outside its own set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RobustnessVerdict {
    pub k: usize,
    pub holds: bool,
    /// Present whenever `holds` is false and `n >= 2`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

/// Number of neighbors of `v` outside the set marked by `inside`.
fn outside_degree(g: &Graph, v: usize, inside: &[bool]) -> usize {
    g.neighbors(v)
        .iter()
        .filter(|&&u| !inside[u as usize])
        .count()
}

/// Checks that `(a, b)` defeats k-robustness of `g`.
pub fn verify_witness(g: &Graph, k: usize, w: &Witness) -> bool {
    let n = g.node_count();
    if w.a.is_empty() || w.b.is_empty() || w.a.iter().chain(&w.b).any(|&v| v >= n) {
        return false;
    }
    let mut in_a = vec![false; n];
    let mut in_b = vec![false; n];
    for &v in &w.a {
        in_a[v] = true;
    }
    for &v in &w.b {
        if in_a[v] {
            return false;
        }
        in_b[v] = true;
    }
    w.a.iter().all(|&v| outside_degree(g, v, &in_a) < k)
        && w.b.iter().all(|&v| outside_degree(g, v, &in_b) < k)
}

struct SubsetTables {
    full: u32,
    reach: Vec<u8>,
    best: Vec<u8>,
    best_arg: Vec<u32>,
}

impl SubsetTables {
    fn new(g: &Graph) -> Self {
        let n = g.node_count();
        let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        let nbr: Vec<u32> = (0..n)
            .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << u))
            .collect();
        let size = 1usize << n;
        let mut reach = vec![0u8; size];
        for s in 1..size as u32 {
            let outside = !s & full;
            let mut bits = s;
            let mut r = 0u32;
            while bits != 0 {
                let v = bits.trailing_zeros() as usize;
                r = r.max((nbr[v] & outside).count_ones());
                bits &= bits - 1;
            }
            reach[s as usize] = r as u8;
        }
        let mut best = reach.clone();
        best[0] = u8::MAX;
        let mut best_arg: Vec<u32> = (0..size as u32).collect();
        for i in 0..n {
            let bit = 1usize << i;
            for m in 0..size {
                if m & bit != 0 && best[m ^ bit] < best[m] {
                    best[m] = best[m ^ bit];
                    best_arg[m] = best_arg[m ^ bit];
                }
            }
        }
        SubsetTables {
            full,
            reach,
            best,
            best_arg,
        }
    }

    /// Disjoint nonempty pair minimizing `max(reach(A), reach(B))`.
    fn minimizing_pair(&self) -> (u8, u32, u32) {
        let mut best = (u8::MAX, 0, 0);
        for a in 1..self.full {
            let rest = !a & self.full;
            let value = self.reach[a as usize].max(self.best[rest as usize]);
            if value < best.0 {
                best = (value, a, self.best_arg[rest as usize]);
            }
        }
        best
    }

    fn first_defeating_pair(&self, k: usize) -> Option<(u32, u32)> {
        (1..self.full).find_map(|a| {
            let rest = !a & self.full;
            ((self.reach[a as usize] as usize) < k && (self.best[rest as usize] as usize) < k)
                .then(|| (a, self.best_arg[rest as usize]))
        })
    }
}

fn mask_to_nodes(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

fn witness_from_masks(a: u32, b: u32) -> Witness {
    // Normalize so that min(A) < min(B).
    let (a, b) = if a.trailing_zeros() < b.trailing_zeros() {
        (a, b)
    } else {
        (b, a)
    };
    Witness {
        a: mask_to_nodes(a),
        b: mask_to_nodes(b),
    }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if n > cap.min(MAX_EXHAUSTIVE_CAP) {
        return Err(Error::Capacity {
            n,
            cap: cap.min(MAX_EXHAUSTIVE_CAP),
        });
    }
    Ok(())
}

pub fn is_k_robust(g: &Graph, k: usize) -> Result<RobustnessVerdict> {
    is_k_robust_with_cap(g, k, DEFAULT_EXHAUSTIVE_CAP)
}

/// Exact k-robustness. A single node is reported as not k-robust for any
/// `k >= 1` (robustness 0), without a witness.
pub fn is_k_robust_with_cap(g: &Graph, k: usize, cap: usize) -> Result<RobustnessVerdict> {
    if k < 1 {
        return Err(Error::param("k must be at least 1"));
    }
    check_cap(g.node_count(), cap)?;
    if g.node_count() == 1 {
        return Ok(RobustnessVerdict {
            k,
            holds: false,
            witness: None,
        });
    }
    let tables = SubsetTables::new(g);
    Ok(match tables.first_defeating_pair(k) {
        Some((a, b)) => RobustnessVerdict {
            k,
            holds: false,
            witness: Some(witness_from_masks(a, b)),
        },
        None => RobustnessVerdict {
            k,
            holds: true,
            witness: None,
        },
    })
}

pub fn robustness(g: &Graph) -> Result<usize> {
    robustness_with_cap(g, DEFAULT_EXHAUSTIVE_CAP)
}

/// Largest `k` for which `g` is k-robust (0 if not even 1-robust).
pub fn robustness_with_cap(g: &Graph, cap: usize) -> Result<usize> {
    check_cap(g.node_count(), cap)?;
    if g.node_count() == 1 {
        return Ok(0);
    }
    Ok(SubsetTables::new(g).minimizing_pair().0 as usize)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScreenOptions {
    /// Number of randomized candidate pairs tried after the deterministic checks.
    pub budget: usize,
    /// Candidate seed sets growing past this size are abandoned.
    pub max_seed_set: usize,
}

impl Default for ScreenOptions {
    fn default() -> Self {
        ScreenOptions {
            budget: 10_000,
            max_seed_set: 64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScreenReason {
    MinDegree,
    NotKConnected,
    Witness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ScreenVerdict {
    CertifiedFalse {
        reason: ScreenReason,
        #[serde(skip_serializing_if = "Option::is_none")]
        witness: Option<Witness>,
    },
    Undecided,
}

impl ScreenVerdict {
    pub fn is_certified_false(&self) -> bool {
        matches!(self, ScreenVerdict::CertifiedFalse { .. })
    }
}

/// One-sided k-robustness screen with default options.
pub fn robustness_screen(g: &Graph, k: usize, seed: Seed) -> Result<ScreenVerdict> {
    robustness_screen_with(g, k, &ScreenOptions::default(), &mut seed.rng())
}

/// `CertifiedFalse` when min degree < k or the graph is not k-connected
/// (k-robust implies k-connected implies min degree >= k), or when the
/// randomized search finds a defeating pair, which is verified before it is
/// returned. Otherwise `Undecided`.
pub fn robustness_screen_with<R: Rng + ?Sized>(
    g: &Graph,
    k: usize,
    opts: &ScreenOptions,
    rng: &mut R,
) -> Result<ScreenVerdict> {
    screen_given(g, k, opts, rng, None)
}

/// The screen, reusing an already computed `is_k_connected(g, k)`.
pub(crate) fn screen_given<R: Rng + ?Sized>(
    g: &Graph,
    k: usize,
    opts: &ScreenOptions,
    rng: &mut R,
    k_connected: Option<bool>,
) -> Result<ScreenVerdict> {
    if k < 1 {
        return Err(Error::param("k must be at least 1"));
    }
    if min_degree(g)? < k {
        return Ok(ScreenVerdict::CertifiedFalse {
            reason: ScreenReason::MinDegree,
            witness: None,
        });
    }
    let k_connected = match k_connected {
        Some(c) => c,
        None => is_k_connected(g, k)?,
    };
    if !k_connected {
        return Ok(ScreenVerdict::CertifiedFalse {
            reason: ScreenReason::NotKConnected,
            witness: None,
        });
    }
    // A connected graph is 1-robust: no defeating pair exists to search for.
    if k == 1 {
        return Ok(ScreenVerdict::Undecided);
    }
    if let Some(w) = falsification_search(g, k, opts, rng) {
        debug_assert!(verify_witness(g, k, &w));
        return Ok(ScreenVerdict::CertifiedFalse {
            reason: ScreenReason::Witness,
            witness: Some(w),
        });
    }
    Ok(ScreenVerdict::Undecided)
}

/// Randomized search for a defeating pair.
///
/// Each candidate starts from a seed node drawn with weight `1 / (deg + 1)^2`
/// and grows a set `A` until every member has fewer than `k` neighbors
/// outside it, adding a random selection of just enough outside neighbors of
/// each offending member. If `A` closes up below the size limit, the largest
/// valid `B ⊆ V \ A` is found by peeling: starting from `V \ A`, repeatedly
/// drop nodes with `k` or more neighbors outside the current set. Any valid
/// `B` survives peeling, so a nonempty result exists iff some partner for `A`
/// exists.
pub fn falsification_search<R: Rng + ?Sized>(
    g: &Graph,
    k: usize,
    opts: &ScreenOptions,
    rng: &mut R,
) -> Option<Witness> {
    let n = g.node_count();
    if n < 2 || opts.budget == 0 {
        return None;
    }
    let weights: Vec<f64> = (0..n)
        .map(|v| 1.0 / ((g.degree(v) + 1) as f64).powi(2))
        .collect();
    let picker = WeightedIndex::new(&weights).ok()?;
    let limit = opts.max_seed_set.min(n - 1);
    let mut in_a = vec![false; n];
    let mut out = vec![0usize; n];
    let mut members: Vec<usize> = Vec::new();
    let mut pending: Vec<usize> = Vec::new();
    let mut outside: Vec<u32> = Vec::new();

    for _ in 0..opts.budget {
        for &v in &members {
            in_a[v] = false;
        }
        members.clear();
        pending.clear();

        let seed = picker.sample(rng);
        in_a[seed] = true;
        members.push(seed);
        out[seed] = g.degree(seed);
        if out[seed] >= k {
            pending.push(seed);
        }
        let mut too_big = false;
        while let Some(a) = pending.pop() {
            if out[a] < k {
                continue;
            }
            outside.clear();
            outside.extend(g.neighbors(a).iter().filter(|&&u| !in_a[u as usize]));
            let need = out[a] + 1 - k;
            let (chosen, _) = outside.partial_shuffle(rng, need);
            for &x in chosen.iter() {
                let x = x as usize;
                in_a[x] = true;
                members.push(x);
                let mut ox = 0;
                for &y in g.neighbors(x) {
                    let y = y as usize;
                    if in_a[y] {
                        out[y] -= 1;
                    } else {
                        ox += 1;
                    }
                }
                out[x] = ox;
                if ox >= k {
                    pending.push(x);
                }
            }
            if members.len() > limit {
                too_big = true;
                break;
            }
            if out[a] >= k {
                pending.push(a);
            }
        }
        if too_big {
            continue;
        }
        if let Some(b) = peel_partner(g, k, &in_a) {
            let mut a = members.clone();
            a.sort_unstable();
            let w = if a[0] < b[0] {
                Witness { a, b }
            } else {
                Witness { a: b, b: a }
            };
            if verify_witness(g, k, &w) {
                return Some(w);
            }
        }
    }
    for &v in &members {
        in_a[v] = false;
    }
    None
}

/// Largest `B` disjoint from `A` whose members all have fewer than `k`
/// neighbors outside `B`, or `None` if it is empty.
fn peel_partner(g: &Graph, k: usize, in_a: &[bool]) -> Option<Vec<usize>> {
    let n = g.node_count();
    let mut in_b: Vec<bool> = in_a.iter().map(|&x| !x).collect();
    let mut out: Vec<usize> = (0..n)
        .map(|v| {
            if in_b[v] {
                outside_degree(g, v, &in_b)
            } else {
                0
            }
        })
        .collect();
    let mut stack: Vec<usize> = (0..n).filter(|&v| in_b[v] && out[v] >= k).collect();
    while let Some(v) = stack.pop() {
        if !in_b[v] {
            continue;
        }
        in_b[v] = false;
        for &u in g.neighbors(v) {
            let u = u as usize;
            if in_b[u] {
                out[u] += 1;
                if out[u] == k {
                    stack.push(u);
                }
            }
        }
    }
    let b: Vec<usize> = (0..n).filter(|&v| in_b[v]).collect();
    (!b.is_empty()).then_some(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bowtie() -> Graph {
        Graph::from_edges(5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)]).unwrap()
    }

    #[test]
    fn examples() {
        assert!(is_k_robust(&Graph::complete(4), 2).unwrap().holds);
        assert!(is_k_robust(&Graph::complete(2), 1).unwrap().holds);
        let v = is_k_robust(&bowtie(), 2).unwrap();
        assert!(!v.holds);
        let w = v.witness.unwrap();
        assert!(verify_witness(&bowtie(), 2, &w));
        assert_eq!(robustness(&Graph::complete(6)).unwrap(), 3);
        assert_eq!(robustness(&Graph::empty(2)).unwrap(), 0);
        assert_eq!(robustness(&Graph::complete(1)).unwrap(), 0);
        assert!(!is_k_robust(&Graph::complete(1), 1).unwrap().holds);
    }

    #[test]
    fn bowtie_named_witness_verifies() {
        let w = Witness {
            a: vec![0, 1],
            b: vec![3, 4],
        };
        assert!(verify_witness(&bowtie(), 2, &w));
        assert!(!verify_witness(&bowtie(), 1, &w));
    }

    #[test]
    fn capacity_and_argument_errors() {
        let big = Graph::complete(17);
        assert!(matches!(
            is_k_robust(&big, 1),
            Err(Error::Capacity { n: 17, cap: 16 })
        ));
        assert!(is_k_robust_with_cap(&big, 1, 17).unwrap().holds);
        assert!(matches!(
            robustness(&Graph::empty(0)),
            Err(Error::EmptyGraph)
        ));
        assert!(is_k_robust(&bowtie(), 0).is_err());
    }

    #[test]
    fn complete_graph_robustness_is_half_rounded_up() {
        for n in 2..=9 {
            assert_eq!(
                robustness(&Graph::complete(n)).unwrap(),
                n.div_ceil(2),
                "K_{n}"
            );
        }
    }

    #[test]
    fn screen_examples() {
        let s = robustness_screen(&bowtie(), 2, Seed::new(0)).unwrap();
        assert_eq!(
            s,
            ScreenVerdict::CertifiedFalse {
                reason: ScreenReason::NotKConnected,
                witness: None
            }
        );
        assert_eq!(
            robustness_screen(&Graph::complete(4), 2, Seed::new(0)).unwrap(),
            ScreenVerdict::Undecided
        );
        let isolated = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert!(matches!(
            robustness_screen(&isolated, 1, Seed::new(0)).unwrap(),
            ScreenVerdict::CertifiedFalse {
                reason: ScreenReason::MinDegree,
                ..
            }
        ));
    }

    #[test]
    fn search_finds_two_cliques_joined_by_a_matching() {
        // Two K5s joined by a perfect matching: 5-connected, but every member
        // of either side has one neighbor outside it, so not 2-robust.
        let mut edges = Vec::new();
        for side in [0, 5] {
            for i in 0..5 {
                for j in i + 1..5 {
                    edges.push((side + i, side + j));
                }
            }
        }
        edges.extend((0..5).map(|i| (i, i + 5)));
        let g = Graph::from_edges(10, edges).unwrap();
        assert!(is_k_connected(&g, 2).unwrap());
        assert!(!is_k_robust(&g, 2).unwrap().holds);
        let w = falsification_search(&g, 2, &ScreenOptions::default(), &mut Seed::new(9).rng())
            .unwrap();
        assert!(verify_witness(&g, 2, &w));
    }
}

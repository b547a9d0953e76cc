// SPDX-License-Identifier: Apache-2.0

//! Brute-force oracles shared by the integration tests. Each one is written
//! straight from a definition and shares no code with the library.

#![allow(dead_code)]

use rand::Rng;
use riglab_core::Graph;

/// Every labelled graph on `n` nodes, as edge masks over `pairs(n)`.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs = pairs(n);
    let m = pairs.len();
    (0u64..1 << m).map(move |mask| graph_from_mask(n, &pairs, mask))
}

pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect()
}

pub fn graph_from_mask(n: usize, pairs: &[(usize, usize)], mask: u64) -> Graph {
    let edges = pairs
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, &e)| e);
    Graph::from_edges(n, edges).unwrap()
}

pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let edges: Vec<_> = pairs(n)
        .into_iter()
        .filter(|_| rng.random_bool(p))
        .collect();
    Graph::from_edges(n, edges).unwrap()
}

fn adjacency(g: &Graph) -> Vec<Vec<bool>> {
    let n = g.node_count();
    let mut adj = vec![vec![false; n]; n];
    for (u, v) in g.edges() {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    adj
}

/// Connectedness of the nodes not in `removed` (vacuously true if none remain).
fn connected_without(adj: &[Vec<bool>], removed: u64) -> bool {
    let n = adj.len();
    let alive: Vec<usize> = (0..n).filter(|v| removed >> v & 1 == 0).collect();
    let Some(&start) = alive.first() else {
        return true;
    };
    let mut seen = vec![false; n];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(u) = stack.pop() {
        for v in 0..n {
            if adj[u][v] && !seen[v] && removed >> v & 1 == 0 {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    alive.iter().all(|&v| seen[v])
}

/// k-connected: more than `k` nodes and connected after deleting any `k - 1`.
pub fn brute_k_connected(g: &Graph, k: usize) -> bool {
    let n = g.node_count();
    if n <= k {
        return false;
    }
    let adj = adjacency(g);
    (0u64..1 << n)
        .filter(|s| (s.count_ones() as usize) < k)
        .all(|s| connected_without(&adj, s))
}

/// Tries all `3^n` placements of nodes into A, B or neither.
pub fn brute_k_robust(g: &Graph, k: usize) -> bool {
    let n = g.node_count();
    if n < 2 {
        return false;
    }
    let adj = adjacency(g);
    let reaches = |set: &[bool]| {
        (0..n).any(|v| set[v] && (0..n).filter(|&u| adj[v][u] && !set[u]).count() >= k)
    };
    let total = 3u64.pow(n as u32);
    for code in 0..total {
        let mut c = code;
        let mut a = vec![false; n];
        let mut b = vec![false; n];
        for v in 0..n {
            match c % 3 {
                1 => a[v] = true,
                2 => b[v] = true,
                _ => {}
            }
            c /= 3;
        }
        if !a.contains(&true) || !b.contains(&true) {
            continue;
        }
        if !reaches(&a) && !reaches(&b) {
            return false;
        }
    }
    true
}

pub fn brute_robustness(g: &Graph) -> usize {
    (1..=g.node_count())
        .take_while(|&k| brute_k_robust(g, k))
        .last()
        .unwrap_or(0)
}

fn subsets_of_size(pool: usize, size: usize) -> Vec<u32> {
    (0u32..1 << pool)
        .filter(|m| m.count_ones() as usize == size)
        .collect()
}

/// Edge probability of the uniform model by listing every pair of K-subsets.
pub fn enum_edge_prob_uniform(pool: usize, size: usize) -> f64 {
    let sets = subsets_of_size(pool, size);
    let hits = sets
        .iter()
        .flat_map(|a| sets.iter().map(move |b| a & b != 0))
        .filter(|&x| x)
        .count();
    hits as f64 / (sets.len() * sets.len()) as f64
}

/// Edge probability of the binomial model by summing over all pairs of subsets.
pub fn enum_edge_prob_binomial(pool: usize, p: f64) -> f64 {
    let weight = |m: u32| {
        let c = m.count_ones() as i32;
        p.powi(c) * (1.0 - p).powi(pool as i32 - c)
    };
    let mut total = 0.0;
    for a in 0u32..1 << pool {
        for b in 0u32..1 << pool {
            if a & b != 0 {
                total += weight(a) * weight(b);
            }
        }
    }
    total
}

/// Edge probability of the general model; `pmf[i]` is the chance of size `i + 1`.
pub fn enum_edge_prob_general(pool: usize, pmf: &[f64]) -> f64 {
    let mut total = 0.0;
    for (i, &pi) in pmf.iter().enumerate() {
        for (j, &pj) in pmf.iter().enumerate() {
            if pi == 0.0 || pj == 0.0 {
                continue;
            }
            let a = subsets_of_size(pool, i + 1);
            let b = subsets_of_size(pool, j + 1);
            let hits = a
                .iter()
                .flat_map(|x| b.iter().map(move |y| x & y != 0))
                .filter(|&h| h)
                .count();
            total += pi * pj * hits as f64 / (a.len() * b.len()) as f64;
        }
    }
    total
}

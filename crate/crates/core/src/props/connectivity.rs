// SPDX-License-Identifier: Apache-2.0

//! Vertex connectivity.
//!
//! `vertex_connectivity` follows the Esfahanian–Hakimi refinement of Even's
//! scheme: with `v` a minimum-degree node, a minimum separator either misses
//! `v` (and then separates `v` from some non-neighbor `w`) or contains `v`
//! (and then separates two non-adjacent neighbors of `v`). Local
//! connectivities come from unit-capacity max flow on the node-split digraph.
//!
//! `is_k_connected` answers the decision question, with linear-time
//! shortcuts for `k <= 2` (BFS, articulation points) and an early exit from
//! the flow scan otherwise. Augmenting paths are found by bidirectional BFS,
//! which on sparse expanding graphs touches only small balls around the two
//! endpoints.
//!
//! Dense inputs are first thinned to a sparse certificate: the union of `k`
//! successive breadth-first forests, each grown on the edges the earlier
//! forests left over, has at most `k (n - 1)` edges and the same
//! `min(κ, k)` as the whole graph (Cheriyan, Kao and Thurimella).

use std::collections::VecDeque;

use crate::rig::Graph;
use crate::{Error, Result};

/// Vertex connectivity `κ(g)`. Complete graphs (including `K_1`) give `n - 1`;
/// the empty graph gives 0.
pub fn vertex_connectivity(g: &Graph) -> usize {
    connectivity_up_to(g, usize::MAX)
}

/// `min(κ(g), limit)`, with every flow stopped once it reaches `limit`.
pub fn connectivity_up_to(g: &Graph, limit: usize) -> usize {
    scan(g, limit, false)
}

/// Esfahanian–Hakimi scan. With `decide` set, returns as soon as some local
/// connectivity falls below `limit` (the value is then only known to be
/// below `limit`).
fn scan(g: &Graph, limit: usize, decide: bool) -> usize {
    let n = g.node_count();
    if n == 0 {
        return 0;
    }
    if g.is_complete() {
        return (n - 1).min(limit);
    }
    if limit < n && g.edge_count() > limit * n {
        return scan(&sparse_certificate(g, limit), limit, decide);
    }
    let pivot = (0..n).min_by_key(|&v| g.degree(v)).expect("n >= 1");
    let mut best = g.degree(pivot).min(limit);
    if best == 0 {
        return 0;
    }
    let mut net = SplitNetwork::new(g);
    for w in 0..n {
        if w != pivot && !g.has_edge(pivot, w) {
            best = best.min(net.local_connectivity(pivot, w, best));
            if best == 0 || (decide && best < limit) {
                return best;
            }
        }
    }
    let nbrs = g.neighbors(pivot);
    for (i, &a) in nbrs.iter().enumerate() {
        for &b in &nbrs[i + 1..] {
            if !g.has_edge(a as usize, b as usize) {
                best = best.min(net.local_connectivity(a as usize, b as usize, best));
                if decide && best < limit {
                    return best;
                }
            }
        }
    }
    best
}

/// Maximum number of internally node-disjoint `s`-`t` paths for non-adjacent
/// `s != t`, capped at `limit`.
pub fn local_connectivity(g: &Graph, s: usize, t: usize, limit: usize) -> Result<usize> {
    if s == t || s >= g.node_count() || t >= g.node_count() {
        return Err(Error::param(format!(
            "need distinct in-range nodes, got {s} and {t}"
        )));
    }
    if g.has_edge(s, t) {
        return Err(Error::param(format!("nodes {s} and {t} are adjacent")));
    }
    Ok(SplitNetwork::new(g).local_connectivity(s, t, limit))
}

/// Whether `κ(g) >= k`. Single-node graphs are k-connected for no `k >= 1`.
pub fn is_k_connected(g: &Graph, k: usize) -> Result<bool> {
    if k < 1 {
        return Err(Error::param("k must be at least 1"));
    }
    let n = g.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if n <= k {
        return Ok(false);
    }
    if (0..n).any(|v| g.degree(v) < k) {
        return Ok(false);
    }
    if k >= 2 && g.edge_count() > k * n {
        return is_k_connected(&sparse_certificate(g, k), k);
    }
    Ok(match k {
        1 => is_connected(g),
        2 => is_biconnected(g),
        _ => scan(g, k, true) >= k,
    })
}

/// Union of `k` successive breadth-first spanning forests.
pub(crate) fn sparse_certificate(g: &Graph, k: usize) -> Graph {
    let n = g.node_count();
    let mut rest: Vec<Vec<u32>> = (0..n).map(|v| g.neighbors(v).to_vec()).collect();
    let mut cert: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut seen = vec![false; n];
    let mut parent = vec![u32::MAX; n];
    let mut queue = VecDeque::new();
    for _ in 0..k {
        seen.iter_mut().for_each(|s| *s = false);
        parent.iter_mut().for_each(|p| *p = u32::MAX);
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            queue.push_back(root);
            while let Some(v) = queue.pop_front() {
                for &u in &rest[v] {
                    if !seen[u as usize] {
                        seen[u as usize] = true;
                        parent[u as usize] = v as u32;
                        queue.push_back(u as usize);
                    }
                }
            }
        }
        let mut used = false;
        for v in 0..n {
            let p = parent[v];
            if p != u32::MAX {
                used = true;
                cert[v].push(p);
                cert[p as usize].push(v as u32);
            }
        }
        if !used {
            break;
        }
        for v in 0..n {
            let pv = parent[v];
            rest[v].retain(|&u| pv != u && parent[u as usize] != v as u32);
        }
    }
    for list in &mut cert {
        list.sort_unstable();
    }
    Graph::from_lists(cert, 0)
}

fn is_connected(g: &Graph) -> bool {
    let n = g.node_count();
    if n <= 1 {
        return true;
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0];
    let mut reached = 1;
    while let Some(v) = stack.pop() {
        for &u in g.neighbors(v) {
            let u = u as usize;
            if !seen[u] {
                seen[u] = true;
                reached += 1;
                stack.push(u);
            }
        }
    }
    reached == n
}

/// Connected and free of articulation points; iterative Tarjan lowpoint DFS.
fn is_biconnected(g: &Graph) -> bool {
    let n = g.node_count();
    if n <= 2 {
        return is_connected(g);
    }
    const UNSEEN: u32 = u32::MAX;
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![0u32; n];
    let root = 0;
    let mut time = 1u32;
    disc[root] = time;
    low[root] = time;
    let mut root_children = 0;
    // (node, parent, next neighbor index)
    let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
    let mut visited = 1;
    while let Some(top) = stack.last_mut() {
        let (v, parent, idx) = *top;
        let nbrs = g.neighbors(v);
        if idx < nbrs.len() {
            top.2 += 1;
            let u = nbrs[idx] as usize;
            if u == parent {
                continue;
            }
            if disc[u] == UNSEEN {
                time += 1;
                disc[u] = time;
                low[u] = time;
                visited += 1;
                if v == root {
                    root_children += 1;
                }
                stack.push((u, v, 0));
            } else {
                low[v] = low[v].min(disc[u]);
            }
        } else {
            stack.pop();
            if parent != usize::MAX {
                low[parent] = low[parent].min(low[v]);
                if parent != root && low[v] >= disc[parent] {
                    return false;
                }
            }
        }
    }
    visited == n && root_children <= 1
}

/// Node-split digraph for unit vertex capacities: node `v` becomes
/// `2v -> 2v + 1`, and each edge `{u, v}` becomes `2u + 1 -> 2v` and
/// `2v + 1 -> 2u`. Arc `e` and its residual partner sit at `e` and `e ^ 1`.
struct SplitNetwork {
    head: Vec<u32>,
    first: Vec<u32>,
    next: Vec<u32>,
    /// Residual capacity per arc.
    res: Vec<u8>,
    touched: Vec<u32>,
    fwd_mark: Vec<u32>,
    bwd_mark: Vec<u32>,
    fwd_arc: Vec<u32>,
    bwd_arc: Vec<u32>,
    stamp: u32,
    fwd_level: Vec<u32>,
    bwd_level: Vec<u32>,
    scratch: Vec<u32>,
}

const NIL: u32 = u32::MAX;

impl SplitNetwork {
    fn new(g: &Graph) -> Self {
        let nodes = 2 * g.node_count();
        let arcs = 2 * (g.node_count() + 2 * g.edge_count());
        let mut net = SplitNetwork {
            head: Vec::with_capacity(arcs),
            first: vec![NIL; nodes],
            next: Vec::with_capacity(arcs),
            res: Vec::with_capacity(arcs),
            touched: Vec::new(),
            fwd_mark: vec![0; nodes],
            bwd_mark: vec![0; nodes],
            fwd_arc: vec![NIL; nodes],
            bwd_arc: vec![NIL; nodes],
            stamp: 0,
            fwd_level: Vec::new(),
            bwd_level: Vec::new(),
            scratch: Vec::new(),
        };
        for v in 0..g.node_count() {
            net.add_arc(2 * v, 2 * v + 1);
            for &u in g.neighbors(v) {
                net.add_arc(2 * v + 1, 2 * u as usize);
            }
        }
        net
    }

    fn add_arc(&mut self, a: usize, b: usize) {
        for (from, to, c) in [(a, b, 1), (b, a, 0)] {
            let e = self.head.len() as u32;
            self.head.push(to as u32);
            self.res.push(c);
            self.next.push(self.first[from]);
            self.first[from] = e;
        }
    }

    fn push(&mut self, e: usize) {
        self.res[e] -= 1;
        self.res[e ^ 1] += 1;
        self.touched.push(e as u32);
    }

    /// Restores every arc to its original capacity.
    fn reset(&mut self) {
        for &e in &self.touched {
            let e = e as usize & !1;
            self.res[e] = 1;
            self.res[e + 1] = 0;
        }
        self.touched.clear();
    }

    fn local_connectivity(&mut self, s: usize, t: usize, limit: usize) -> usize {
        let (src, sink) = (2 * s + 1, 2 * t);
        let mut paths = 0;
        while paths < limit && self.augment(src, sink) {
            paths += 1;
        }
        self.reset();
        paths
    }

    fn next_stamp(&mut self) -> u32 {
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.fwd_mark.iter_mut().for_each(|m| *m = 0);
            self.bwd_mark.iter_mut().for_each(|m| *m = 0);
            self.stamp = 1;
        }
        self.stamp
    }

    /// One augmenting path by bidirectional BFS in the residual graph,
    /// always growing the smaller frontier by a full level.
    fn augment(&mut self, src: usize, sink: usize) -> bool {
        let stamp = self.next_stamp();
        self.fwd_mark[src] = stamp;
        self.bwd_mark[sink] = stamp;
        self.fwd_level.clear();
        self.bwd_level.clear();
        self.fwd_level.push(src as u32);
        self.bwd_level.push(sink as u32);
        while !self.fwd_level.is_empty() && !self.bwd_level.is_empty() {
            let meet = if self.fwd_level.len() <= self.bwd_level.len() {
                self.grow_forward(stamp)
            } else {
                self.grow_backward(stamp)
            };
            if let Some((x, e, y)) = meet {
                self.apply(src, sink, x, e, y);
                return true;
            }
        }
        false
    }

    /// Expands the forward level; returns `(x, e, y)` where arc `e: x -> y`
    /// joins the two searches.
    fn grow_forward(&mut self, stamp: u32) -> Option<(usize, usize, usize)> {
        let level = std::mem::take(&mut self.fwd_level);
        self.scratch.clear();
        let mut meet = None;
        'outer: for &x in &level {
            let mut e = self.first[x as usize];
            while e != NIL {
                let y = self.head[e as usize] as usize;
                if self.res[e as usize] > 0 && self.fwd_mark[y] != stamp {
                    if self.bwd_mark[y] == stamp {
                        meet = Some((x as usize, e as usize, y));
                        break 'outer;
                    }
                    self.fwd_mark[y] = stamp;
                    self.fwd_arc[y] = e;
                    self.scratch.push(y as u32);
                }
                e = self.next[e as usize];
            }
        }
        self.fwd_level = std::mem::take(&mut self.scratch);
        self.scratch = level;
        meet
    }

    fn grow_backward(&mut self, stamp: u32) -> Option<(usize, usize, usize)> {
        let level = std::mem::take(&mut self.bwd_level);
        self.scratch.clear();
        let mut meet = None;
        'outer: for &y in &level {
            let mut e = self.first[y as usize];
            while e != NIL {
                // The partner arc runs x -> y.
                let x = self.head[e as usize] as usize;
                let r = e as usize ^ 1;
                if self.res[r] > 0 && self.bwd_mark[x] != stamp {
                    if self.fwd_mark[x] == stamp {
                        meet = Some((x, r, y as usize));
                        break 'outer;
                    }
                    self.bwd_mark[x] = stamp;
                    self.bwd_arc[x] = r as u32;
                    self.scratch.push(x as u32);
                }
                e = self.next[e as usize];
            }
        }
        self.bwd_level = std::mem::take(&mut self.scratch);
        self.scratch = level;
        meet
    }

    fn apply(&mut self, src: usize, sink: usize, x: usize, e: usize, y: usize) {
        let mut cur = x;
        while cur != src {
            let a = self.fwd_arc[cur] as usize;
            self.push(a);
            cur = self.head[a ^ 1] as usize;
        }
        self.push(e);
        let mut cur = y;
        while cur != sink {
            let a = self.bwd_arc[cur] as usize;
            self.push(a);
            cur = self.head[a] as usize;
        }
    }
}

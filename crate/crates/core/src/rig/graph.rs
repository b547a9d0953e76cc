// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use crate::{Error, Result};

/// Graphs with at most this many nodes also carry fixed-width bit rows.
pub const DEFAULT_BIT_ROW_CAP: usize = 4096;

/// Immutable simple undirected graph on nodes `0..n`.
///
/// Neighbor lists are sorted. When `n` is at most the bit-row cap the
/// adjacency matrix is also stored as packed `u64` rows so membership tests
/// are a single word lookup.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    m: usize,
    adj: Vec<Vec<u32>>,
    bits: Option<BitRows>,
}

#[derive(Clone, PartialEq, Eq)]
struct BitRows {
    words: usize,
    data: Vec<u64>,
}

impl BitRows {
    fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        BitRows {
            words,
            data: vec![0; words * n],
        }
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize) {
        self.data[i * self.words + j / 64] |= 1 << (j % 64);
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("m", &self.m)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self::from_lists(vec![Vec::new(); n], DEFAULT_BIT_ROW_CAP)
    }

    pub fn complete(n: usize) -> Self {
        let adj = (0..n)
            .map(|i| (0..n as u32).filter(|&j| j as usize != i).collect())
            .collect();
        Self::from_lists(adj, DEFAULT_BIT_ROW_CAP)
    }

    /// Builds a graph from an edge list. Duplicate edges are merged; self-loops
    /// and out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidInput(format!(
                    "edge ({i}, {j}) out of range for n = {n}"
                )));
            }
            if i == j {
                return Err(Error::InvalidInput(format!("self-loop at node {i}")));
            }
            adj[i].push(j as u32);
            adj[j].push(i as u32);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self::from_lists(adj, DEFAULT_BIT_ROW_CAP))
    }

    /// Builds from sorted, deduplicated, symmetric neighbor lists.
    pub(crate) fn from_lists(adj: Vec<Vec<u32>>, bit_cap: usize) -> Self {
        let n = adj.len();
        let m = adj.iter().map(Vec::len).sum::<usize>() / 2;
        let bits = (n <= bit_cap).then(|| {
            let mut rows = BitRows::new(n);
            for (i, list) in adj.iter().enumerate() {
                for &j in list {
                    rows.set(i, j as usize);
                }
            }
            rows
        });
        Graph { n, m, adj, bits }
    }

    /// Builds from an (unordered) collection of cliques, e.g. the holders of
    /// each object. Uses bit rows to deduplicate when `n <= bit_cap`.
    pub(crate) fn from_cliques<'a, I>(n: usize, cliques: I, bit_cap: usize) -> Self
    where
        I: IntoIterator<Item = &'a [u32]>,
    {
        if n <= bit_cap {
            let mut rows = BitRows::new(n);
            for clique in cliques {
                for (a, &u) in clique.iter().enumerate() {
                    for &v in &clique[a + 1..] {
                        rows.set(u as usize, v as usize);
                        rows.set(v as usize, u as usize);
                    }
                }
            }
            let adj = (0..n)
                .map(|i| {
                    let mut list = Vec::new();
                    for (w, &word) in rows.row(i).iter().enumerate() {
                        let mut word = word;
                        while word != 0 {
                            let b = word.trailing_zeros() as usize;
                            list.push((w * 64 + b) as u32);
                            word &= word - 1;
                        }
                    }
                    list
                })
                .collect::<Vec<Vec<u32>>>();
            let m = adj.iter().map(Vec::len).sum::<usize>() / 2;
            Graph {
                n,
                m,
                adj,
                bits: Some(rows),
            }
        } else {
            let mut adj = vec![Vec::new(); n];
            for clique in cliques {
                for (a, &u) in clique.iter().enumerate() {
                    for &v in &clique[a + 1..] {
                        adj[u as usize].push(v);
                        adj[v as usize].push(u);
                    }
                }
            }
            for list in &mut adj {
                list.sort_unstable();
                list.dedup();
            }
            Self::from_lists(adj, bit_cap)
        }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_bit_rows(&self) -> bool {
        self.bits.is_some()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u >= self.n || v >= self.n {
            return false;
        }
        match &self.bits {
            Some(rows) => rows.get(u, v),
            None => self.adj[u].binary_search(&(v as u32)).is_ok(),
        }
    }

    pub fn is_complete(&self) -> bool {
        self.n < 2 || self.m == self.n * (self.n - 1) / 2
    }

    /// Edges `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(i, list)| {
            list.iter()
                .map(|&j| j as usize)
                .filter(move |&j| j > i)
                .map(move |j| (i, j))
        })
    }

    /// True when every edge of `self` is an edge of `other` (same node set).
    pub fn is_spanning_subgraph_of(&self, other: &Graph) -> bool {
        self.n == other.n && self.edges().all(|(i, j)| other.has_edge(i, j))
    }

    /// Copy of the graph with `(u, v)` added.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Graph> {
        Graph::from_edges(self.n, self.edges().chain(std::iter::once((u, v))))
    }

    /// Induced subgraph on the nodes for which `keep` is true, relabelled in order.
    pub fn induced(&self, keep: &[bool]) -> Graph {
        let mut index = vec![u32::MAX; self.n];
        let mut next = 0u32;
        for v in 0..self.n {
            if keep[v] {
                index[v] = next;
                next += 1;
            }
        }
        let adj = (0..self.n)
            .filter(|&v| keep[v])
            .map(|v| {
                self.adj[v]
                    .iter()
                    .filter(|&&u| keep[u as usize])
                    .map(|&u| index[u as usize])
                    .collect()
            })
            .collect();
        Graph::from_lists(adj, DEFAULT_BIT_ROW_CAP)
    }

    /// Edge-list text: `"n m"` then one `"i j"` line per edge with `i < j`.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.m);
        for (i, j) in self.edges() {
            let _ = writeln!(out, "{i} {j}");
        }
        out
    }

    pub fn write_edge_list<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(self.to_edge_list().as_bytes())?;
        Ok(())
    }

    pub fn read_edge_list<R: BufRead>(r: R) -> Result<Graph> {
        let mut lines = r
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty()));
        let (line, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing \"n m\" header".into(),
        })?;
        let header = header?;
        let (n, m) = parse_pair(&header, line)?;
        let mut edges = Vec::with_capacity(m);
        for (line, text) in lines {
            let (i, j) = parse_pair(&text?, line)?;
            if i >= j {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected i < j, got {i} {j}"),
                });
            }
            edges.push((i, j));
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: 1,
                msg: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        let g = Graph::from_edges(n, edges)?;
        if g.edge_count() != m {
            return Err(Error::Parse {
                line: 1,
                msg: "duplicate edges in edge list".into(),
            });
        }
        Ok(g)
    }

    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        Self::read_edge_list(text.as_bytes())
    }
}

fn parse_pair(text: &str, line: usize) -> Result<(usize, usize)> {
    let mut it = text.split_whitespace().map(str::parse::<usize>);
    match (it.next(), it.next(), it.next()) {
        (Some(Ok(a)), Some(Ok(b)), None) => Ok((a, b)),
        _ => Err(Error::Parse {
            line,
            msg: format!("expected two non-negative integers, got {text:?}"),
        }),
    }
}

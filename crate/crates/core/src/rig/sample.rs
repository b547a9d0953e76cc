// SPDX-License-Identifier: Apache-2.0

use rand::seq::index;
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use super::assignment::{graph_from_sets, ObjectAssignment};
use super::distribution::SizeDistribution;
use super::graph::Graph;
use super::seed::Seed;
use crate::{Error, Result};

/// A random graph model with all parameters fixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum Model {
    /// `G_b(n, P, p)`: each object joins each set independently with probability `p`.
    Binomial { n: usize, pool: usize, p: f64 },
    /// `G_u(n, P, K)`: each set is a uniform `K`-subset of the pool.
    Uniform {
        n: usize,
        pool: usize,
        set_size: usize,
    },
    /// `G(n, P, D)`: set size drawn from `D`, then a uniform subset of that size.
    General {
        n: usize,
        pool: usize,
        sizes: SizeDistribution,
    },
    /// `G(n, p)`: each node pair joined independently with probability `p`.
    ErdosRenyi { n: usize, p: f64 },
}

impl Model {
    pub fn node_count(&self) -> usize {
        match *self {
            Model::Binomial { n, .. }
            | Model::Uniform { n, .. }
            | Model::General { n, .. }
            | Model::ErdosRenyi { n, .. } => n,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Model::Binomial { .. } => "binomial",
            Model::Uniform { .. } => "uniform",
            Model::General { .. } => "general",
            Model::ErdosRenyi { .. } => "erdos_renyi",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Model::Binomial { pool, p, .. } => {
                check_pool(*pool)?;
                check_prob(*p, "p")
            }
            Model::Uniform { pool, set_size, .. } => {
                check_pool(*pool)?;
                if *set_size == 0 || set_size > pool {
                    return Err(Error::param(format!(
                        "set size K = {set_size} must satisfy 1 <= K <= P = {pool}"
                    )));
                }
                Ok(())
            }
            Model::General { pool, sizes, .. } => {
                check_pool(*pool)?;
                if sizes.max_size() > *pool {
                    return Err(Error::InvalidDistribution(format!(
                        "support reaches size {} but the pool has {pool} objects",
                        sizes.max_size()
                    )));
                }
                Ok(())
            }
            Model::ErdosRenyi { p, .. } => check_prob(*p, "p_hat"),
        }
    }

    /// Samples a graph together with its generating object assignment
    /// (`None` for Erdős–Rényi, which has no objects).
    pub fn sample<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
    ) -> Result<(Graph, Option<ObjectAssignment>)> {
        self.validate()?;
        Ok(match self {
            Model::ErdosRenyi { n, p } => (er_graph(rng, *n, *p), None),
            _ => {
                let sets = self.sample_sets(rng);
                let g = graph_from_sets(&sets);
                let pool = self.pool().expect("intersection model");
                (g, Some(ObjectAssignment::from_sorted_unchecked(pool, sets)))
            }
        })
    }

    pub fn sample_graph<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Graph> {
        self.validate()?;
        Ok(match self {
            Model::ErdosRenyi { n, p } => er_graph(rng, *n, *p),
            _ => graph_from_sets(&self.sample_sets(rng)),
        })
    }

    pub fn pool(&self) -> Option<usize> {
        match *self {
            Model::Binomial { pool, .. }
            | Model::Uniform { pool, .. }
            | Model::General { pool, .. } => Some(pool),
            Model::ErdosRenyi { .. } => None,
        }
    }

    fn sample_sets<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Vec<u32>> {
        match self {
            Model::Binomial { n, pool, p } => {
                let sizes = Binomial::new(*pool as u64, *p).expect("validated p");
                (0..*n)
                    .map(|_| {
                        let size = sizes.sample(rng) as usize;
                        uniform_subset(rng, *pool, size)
                    })
                    .collect()
            }
            Model::Uniform { n, pool, set_size } => (0..*n)
                .map(|_| uniform_subset(rng, *pool, *set_size))
                .collect(),
            Model::General { n, pool, sizes } => (0..*n)
                .map(|_| {
                    let s = sizes.sample_size(rng);
                    uniform_subset(rng, *pool, s)
                })
                .collect(),
            Model::ErdosRenyi { .. } => unreachable!("no object sets"),
        }
    }
}

/// Model families indexed by one scalar parameter (`p`, `K` or `p_hat`),
/// with the node count and pool size held fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Binomial,
    Uniform,
    ErdosRenyi,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Binomial => "binomial",
            ModelKind::Uniform => "uniform",
            ModelKind::ErdosRenyi => "erdos_renyi",
        }
    }

    /// Name of the swept parameter.
    pub fn param_name(self) -> &'static str {
        match self {
            ModelKind::Binomial => "p",
            ModelKind::Uniform => "K",
            ModelKind::ErdosRenyi => "p_hat",
        }
    }

    /// The model at parameter value `param`. `K` must be a whole number;
    /// `pool` is ignored for Erdős–Rényi.
    pub fn model(self, n: usize, pool: usize, param: f64) -> Result<Model> {
        let model = match self {
            ModelKind::Binomial => Model::Binomial { n, pool, p: param },
            ModelKind::Uniform => {
                if param.fract() != 0.0 || param < 0.0 || !param.is_finite() {
                    return Err(Error::param(format!(
                        "set size K = {param} is not a whole number"
                    )));
                }
                Model::Uniform {
                    n,
                    pool,
                    set_size: param as usize,
                }
            }
            ModelKind::ErdosRenyi => Model::ErdosRenyi { n, p: param },
        };
        model.validate()?;
        Ok(model)
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "binomial" => Ok(ModelKind::Binomial),
            "uniform" => Ok(ModelKind::Uniform),
            "er" | "erdos_renyi" => Ok(ModelKind::ErdosRenyi),
            other => Err(Error::param(format!("unknown model kind {other:?}"))),
        }
    }
}

fn check_pool(pool: usize) -> Result<()> {
    if pool == 0 {
        return Err(Error::param("object pool size P must be at least 1"));
    }
    if pool > u32::MAX as usize {
        return Err(Error::param("object pool size P must fit in 32 bits"));
    }
    Ok(())
}

fn check_prob(p: f64, name: &str) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param(format!("{name} = {p} is not in [0, 1]")));
    }
    Ok(())
}

/// Uniform `size`-subset of `0..pool`, sorted.
pub(crate) fn uniform_subset<R: Rng + ?Sized>(rng: &mut R, pool: usize, size: usize) -> Vec<u32> {
    let mut set: Vec<u32> = index::sample(rng, pool, size)
        .into_iter()
        .map(|o| o as u32)
        .collect();
    set.sort_unstable();
    set
}

/// Uniform `size`-subset of `0..pool` in uniformly random order, so that every
/// prefix is itself a uniform subset of its length.
pub(crate) fn shuffled_subset<R: Rng + ?Sized>(rng: &mut R, pool: usize, size: usize) -> Vec<u32> {
    index::sample(rng, pool, size)
        .into_iter()
        .map(|o| o as u32)
        .collect()
}

/// `G(n, p)` by geometric skipping over the `C(n, 2)` pair indices.
fn er_graph<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    if n >= 2 && p > 0.0 {
        if p >= 1.0 {
            return Graph::complete(n);
        }
        let log_q = (-p).ln_1p();
        // Row-major walk over pairs (v, w) with w < v.
        let (mut v, mut w): (usize, i64) = (1, -1);
        loop {
            let r: f64 = rng.random();
            let skip = ((1.0 - r).ln() / log_q).floor();
            w += 1 + if skip.is_finite() {
                skip as i64
            } else {
                i64::MAX / 4
            };
            while w >= v as i64 && v < n {
                w -= v as i64;
                v += 1;
            }
            if v >= n {
                break;
            }
            edges.push((w as usize, v));
        }
    }
    Graph::from_edges(n, edges).expect("pairs are in range")
}

pub fn sample_uniform_rig(
    n: usize,
    pool: usize,
    set_size: usize,
    seed: Seed,
) -> Result<(Graph, ObjectAssignment)> {
    let (g, a) = Model::Uniform { n, pool, set_size }.sample(&mut seed.rng())?;
    Ok((g, a.expect("intersection model")))
}

pub fn sample_binomial_rig(
    n: usize,
    pool: usize,
    p: f64,
    seed: Seed,
) -> Result<(Graph, ObjectAssignment)> {
    let (g, a) = Model::Binomial { n, pool, p }.sample(&mut seed.rng())?;
    Ok((g, a.expect("intersection model")))
}

pub fn sample_general_rig(
    n: usize,
    pool: usize,
    sizes: &SizeDistribution,
    seed: Seed,
) -> Result<(Graph, ObjectAssignment)> {
    let model = Model::General {
        n,
        pool,
        sizes: sizes.clone(),
    };
    let (g, a) = model.sample(&mut seed.rng())?;
    Ok((g, a.expect("intersection model")))
}

pub fn sample_er(n: usize, p_hat: f64, seed: Seed) -> Result<Graph> {
    Model::ErdosRenyi { n, p: p_hat }.sample_graph(&mut seed.rng())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn freq<F: Fn(Seed) -> bool>(trials: u64, f: F) -> f64 {
        (0..trials)
            .filter(|&t| f(Seed::new(1000).derive(t)))
            .count() as f64
            / trials as f64
    }

    fn within_3_sigma(est: f64, p: f64, trials: u64) {
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        assert!(
            (est - p).abs() <= 3.0 * sigma,
            "estimate {est} vs {p} (3 sigma = {})",
            3.0 * sigma
        );
    }

    #[test]
    fn uniform_full_pool_is_complete() {
        for s in 0..5 {
            let (g, a) = sample_uniform_rig(4, 6, 6, Seed::new(s)).unwrap();
            assert!(g.is_complete() && g.edge_count() == 6);
            assert!(a.sets().iter().all(|s| s.len() == 6));
        }
    }

    #[test]
    fn uniform_single_node() {
        let (g, _) = sample_uniform_rig(1, 5, 2, Seed::new(3)).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (1, 0));
    }

    #[test]
    fn uniform_rejects_bad_k() {
        assert!(sample_uniform_rig(3, 5, 0, Seed::new(0)).is_err());
        assert!(sample_uniform_rig(3, 5, 6, Seed::new(0)).is_err());
        assert!(sample_uniform_rig(3, 0, 0, Seed::new(0)).is_err());
    }

    #[test]
    fn binomial_extremes() {
        let (g, _) = sample_binomial_rig(5, 10, 0.0, Seed::new(1)).unwrap();
        assert_eq!(g.edge_count(), 0);
        let (g, a) = sample_binomial_rig(5, 10, 1.0, Seed::new(1)).unwrap();
        assert!(g.is_complete());
        assert!(a.sets().iter().all(|s| s.len() == 10));
        assert!(sample_binomial_rig(5, 10, 1.5, Seed::new(1)).is_err());
        assert!(sample_binomial_rig(5, 10, -0.1, Seed::new(1)).is_err());
    }

    #[test]
    fn general_checks_support_against_pool() {
        let d = SizeDistribution::uniform(5, 1, 5).unwrap();
        assert!(sample_general_rig(3, 4, &d, Seed::new(0)).is_err());
        let (g, _) = sample_general_rig(1, 5, &d, Seed::new(0)).unwrap();
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn er_extremes() {
        assert!(sample_er(4, 1.0, Seed::new(0)).unwrap().is_complete());
        assert_eq!(sample_er(4, 0.0, Seed::new(0)).unwrap().edge_count(), 0);
        assert!(sample_er(4, 1.01, Seed::new(0)).is_err());
    }

    #[test]
    fn er_edge_frequency() {
        let t = 100_000;
        within_3_sigma(
            freq(t, |s| sample_er(2, 0.3, s).unwrap().has_edge(0, 1)),
            0.3,
            t,
        );
    }

    #[test]
    fn er_pair_coverage() {
        // Every pair of a 6-node graph should be hit at p = 0.5.
        let mut seen = [[false; 6]; 6];
        for s in 0..200 {
            for (i, j) in sample_er(6, 0.5, Seed::new(s)).unwrap().edges() {
                seen[i][j] = true;
            }
        }
        for i in 0..6 {
            for j in i + 1..6 {
                assert!(seen[i][j], "pair ({i},{j}) never sampled");
            }
        }
    }

    #[test]
    fn samplers_agree_with_assignment_graph() {
        let models = [
            Model::Binomial {
                n: 30,
                pool: 40,
                p: 0.05,
            },
            Model::Uniform {
                n: 30,
                pool: 40,
                set_size: 3,
            },
            Model::General {
                n: 30,
                pool: 40,
                sizes: SizeDistribution::uniform(40, 1, 6).unwrap(),
            },
        ];
        for m in &models {
            for s in 0..20 {
                let (g, a) = m.sample(&mut Seed::new(s).rng()).unwrap();
                assert_eq!(g, a.unwrap().graph_pairwise());
            }
        }
    }
}

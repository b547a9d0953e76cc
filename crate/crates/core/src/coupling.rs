// SPDX-License-Identifier: Apache-2.0

//! Monotone couplings between random intersection graph models.
//!
//! The nested samplers draw two assignments jointly so that every set of the
//! smaller model is contained in the corresponding set of the larger one;
//! the resulting graphs are then nested edgewise by construction. The
//! binomial/uniform bracket uses one random object ordering per node: the
//! binomial set is the first `X_i ~ Bin(P, p)` objects and the uniform sets
//! are the first `K_-` and `K_+`, so the three graphs are nested whenever
//! every `X_i` lies in `[K_-, K_+]`.

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::edge_prob_exact;
use crate::props::{CheckOptions, Property};
use crate::rig::{shuffled_subset, Graph, Model, Seed, SizeDistribution};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CoupledPair {
    pub lo: Graph,
    pub hi: Graph,
    /// `lo` is a spanning subgraph of `hi`.
    pub subgraph_holds: bool,
}

impl CoupledPair {
    fn new(lo: Graph, hi: Graph) -> Self {
        let subgraph_holds = lo.is_spanning_subgraph_of(&hi);
        CoupledPair {
            lo,
            hi,
            subgraph_holds,
        }
    }
}

/// `G_u(n, P, K1) ⊆ G_u(n, P, K2)`: `S2` uniform of size `K2`, `S1` a uniform
/// `K1`-subset of `S2`.
pub fn nested_uniform_pair(
    n: usize,
    pool: usize,
    k1: usize,
    k2: usize,
    seed: Seed,
) -> Result<CoupledPair> {
    if k1 > k2 {
        return Err(Error::param(format!("need K1 <= K2, got {k1} > {k2}")));
    }
    Model::Uniform {
        n,
        pool,
        set_size: k1,
    }
    .validate()?;
    Model::Uniform {
        n,
        pool,
        set_size: k2,
    }
    .validate()?;
    let mut rng = seed.rng();
    let mut lo = Vec::with_capacity(n);
    let mut hi = Vec::with_capacity(n);
    for _ in 0..n {
        // A shuffled K2-subset; its first K1 entries are a uniform K1-subset of it.
        let order = shuffled_subset(&mut rng, pool, k2);
        let mut small = order[..k1].to_vec();
        let mut big = order;
        small.sort_unstable();
        big.sort_unstable();
        lo.push(small);
        hi.push(big);
    }
    Ok(CoupledPair::new(graph_of(&lo), graph_of(&hi)))
}

/// `G_b(n, P, p1) ⊆ G_b(n, P, p2)`: each object enters `S2` with probability
/// `p2` and is kept in `S1` with probability `p1 / p2`.
pub fn nested_binomial_pair(
    n: usize,
    pool: usize,
    p1: f64,
    p2: f64,
    seed: Seed,
) -> Result<CoupledPair> {
    if p1 > p2 {
        return Err(Error::param(format!("need p1 <= p2, got {p1} > {p2}")));
    }
    Model::Binomial { n, pool, p: p1 }.validate()?;
    Model::Binomial { n, pool, p: p2 }.validate()?;
    let mut rng = seed.rng();
    let sizes = Binomial::new(pool as u64, p2).expect("validated");
    let keep = if p2 > 0.0 { p1 / p2 } else { 0.0 };
    let mut lo = Vec::with_capacity(n);
    let mut hi = Vec::with_capacity(n);
    for _ in 0..n {
        let size = sizes.sample(&mut rng) as usize;
        let mut big = shuffled_subset(&mut rng, pool, size);
        big.sort_unstable();
        let small: Vec<u32> = big
            .iter()
            .copied()
            .filter(|_| rng.random_bool(keep))
            .collect();
        lo.push(small);
        hi.push(big);
    }
    Ok(CoupledPair::new(graph_of(&lo), graph_of(&hi)))
}

fn graph_of(sets: &[Vec<u32>]) -> Graph {
    crate::rig::graph_from_sets(sets)
}

/// Bracket parameters for a binomial model `G_b(n, P, p)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BracketParams {
    /// `floor(pP - sqrt(3 (pP + ln n) ln n))`, clamped to `>= 0`.
    pub k_minus: usize,
    /// `ceil(pP + sqrt(3 (pP + ln n) ln n))`, clamped to `<= P`.
    pub k_plus: usize,
    /// Concentration width of the binomial set sizes `Bin(P, p)`.
    pub eps_n: f64,
    /// Erdős–Rényi parameter dominated by the binomial model.
    pub p_hat: f64,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
}

/// `pP ∓ sqrt(3 (pP + ln n) ln n)` rounded outward and clamped to `[0, P]`.
pub fn bracket_sizes(n: usize, pool: usize, p: f64) -> Result<(usize, usize)> {
    if n < 2 {
        return Err(Error::Domain(format!("needs n >= 2, got n = {n}")));
    }
    Model::Binomial { n, pool, p }.validate()?;
    let mean = p * pool as f64;
    let ln_n = (n as f64).ln();
    let half_width = (3.0 * (mean + ln_n) * ln_n).sqrt();
    let lo = (mean - half_width).floor().max(0.0) as usize;
    let hi = ((mean + half_width).ceil() as usize).min(pool);
    Ok((lo, hi))
}

pub fn bracket_binomial(n: usize, pool: usize, p: f64) -> Result<BracketParams> {
    let (k_minus, k_plus) = bracket_sizes(n, pool, p)?;
    let mut warnings = Vec::new();
    let mean = p * pool as f64;
    let eps_n = if mean > 0.0 {
        let eps = eps_from_moments(n, mean, mean * (1.0 - p))?;
        if !eps.in_regime {
            warnings.push(format!("eps_n = {} is not below 1 / ln n", eps.eps));
        }
        eps.eps
    } else {
        warnings.push("pP = 0: set sizes are identically zero".into());
        0.0
    };
    let hat = p_hat_lemma7(n, pool, p)?;
    warnings.extend(hat.warnings);
    Ok(BracketParams {
        k_minus,
        k_plus,
        eps_n,
        p_hat: hat.p_hat,
        warnings,
    })
}

/// One joint draw of `G_u(K_-) , G_b(p), G_u(K_+)` from shared per-node orderings.
#[derive(Debug, Clone)]
pub struct BracketSample {
    pub minus: Graph,
    pub binomial: Graph,
    pub plus: Graph,
    /// Every binomial set size fell inside `[K_-, K_+]`.
    pub contained: bool,
}

pub fn bracket_sample(n: usize, pool: usize, p: f64, seed: Seed) -> Result<BracketSample> {
    let (k_minus, k_plus) = bracket_sizes(n, pool, p)?;
    let mut rng = seed.rng();
    let sizes = Binomial::new(pool as u64, p).expect("validated");
    let mut minus = Vec::with_capacity(n);
    let mut mid = Vec::with_capacity(n);
    let mut plus = Vec::with_capacity(n);
    let mut contained = true;
    for _ in 0..n {
        let x = sizes.sample(&mut rng) as usize;
        contained &= (k_minus..=k_plus).contains(&x);
        let order = shuffled_subset(&mut rng, pool, x.max(k_plus));
        let prefix = |len: usize| {
            let mut s = order[..len].to_vec();
            s.sort_unstable();
            s
        };
        minus.push(prefix(k_minus));
        mid.push(prefix(x));
        plus.push(prefix(k_plus));
    }
    Ok(BracketSample {
        minus: graph_of(&minus),
        binomial: graph_of(&mid),
        plus: graph_of(&plus),
        contained,
    })
}

/// Whether every binomial set size lands in `[K_-, K_+]` for one seeded draw.
/// Only the sizes are needed, so no sets are materialized.
pub fn bracket_success_binomial(n: usize, pool: usize, p: f64, seed: Seed) -> Result<bool> {
    let (k_minus, k_plus) = bracket_sizes(n, pool, p)?;
    let mut rng = seed.rng();
    let sizes = Binomial::new(pool as u64, p).expect("validated");
    Ok((0..n).all(|_| (k_minus..=k_plus).contains(&(sizes.sample(&mut rng) as usize))))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsReport {
    pub eps: f64,
    /// `(1 - eps) E[X]`.
    pub lower: f64,
    /// `(1 + eps) E[X]`.
    pub upper: f64,
    /// `eps < 1 / ln n`.
    pub in_regime: bool,
}

/// `eps_n = (n Var[X] / E[X]^2)^(1/4) / sqrt(ln n)`.
pub fn eps_from_moments(n: usize, mean: f64, variance: f64) -> Result<EpsReport> {
    if n < 3 {
        return Err(Error::Domain(format!("needs n >= 3, got n = {n}")));
    }
    if !(mean > 0.0) || variance < 0.0 {
        return Err(Error::param(format!(
            "needs E[X] > 0 and Var[X] >= 0, got {mean}, {variance}"
        )));
    }
    let ln_n = (n as f64).ln();
    let eps = (n as f64 * variance / (mean * mean)).powf(0.25) / ln_n.sqrt();
    let in_regime = eps < 1.0 / ln_n;
    if !in_regime {
        log::warn!("eps_n = {eps} is not below 1 / ln n = {}", 1.0 / ln_n);
    }
    Ok(EpsReport {
        eps,
        lower: (1.0 - eps) * mean,
        upper: (1.0 + eps) * mean,
        in_regime,
    })
}

pub fn eps_general(n: usize, sizes: &SizeDistribution) -> Result<EpsReport> {
    eps_from_moments(n, sizes.mean(), sizes.variance())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PHatReport {
    pub p_hat: f64,
    /// The raw value was negative (or `p^2 P >= 1`) and was clamped to 0.
    pub clamped: bool,
    /// `p n ln n`; the small-`p` hypothesis wants this bounded.
    pub p_n_ln_n: f64,
    /// `p^2 P ln n`; the sparse-edge hypothesis wants this bounded.
    pub p2_pool_ln_n: f64,
    pub warnings: Vec<String>,
}

/// `p_hat = p^2 P (1 - n p + 2 p - p^2 P / 2)`.
pub fn p_hat_lemma7(n: usize, pool: usize, p: f64) -> Result<PHatReport> {
    if n < 2 {
        return Err(Error::Domain(format!("needs n >= 2, got n = {n}")));
    }
    Model::Binomial { n, pool, p }.validate()?;
    let s = p * p * pool as f64;
    let raw = s * (1.0 - n as f64 * p + 2.0 * p - s / 2.0);
    let mut warnings = Vec::new();
    let mut clamped = false;
    let p_hat = if s >= 1.0 || raw < 0.0 {
        clamped = true;
        warnings.push(format!("p_hat clamped to 0 (p^2 P = {s}, raw value {raw})"));
        0.0
    } else {
        raw
    };
    let ln_n = (n as f64).ln();
    let p_n_ln_n = p * n as f64 * ln_n;
    let p2_pool_ln_n = s * ln_n;
    if p_n_ln_n > 1.0 {
        warnings.push(format!(
            "p n ln n = {p_n_ln_n} > 1: outside the small-p regime"
        ));
    }
    if p2_pool_ln_n > 1.0 {
        warnings.push(format!(
            "p^2 P ln n = {p2_pool_ln_n} > 1: outside the sparse regime"
        ));
    }
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(PHatReport {
        p_hat,
        clamped,
        p_n_ln_n,
        p2_pool_ln_n,
        warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DominanceResult {
    pub trials: usize,
    pub successes_lo: usize,
    pub successes_hi: usize,
    pub p_lo: f64,
    pub p_hi: f64,
    /// `(p_lo - p_hi) / sqrt(p_lo (1 - p_lo) / t + p_hi (1 - p_hi) / t)`;
    /// large positive values contradict `lo ⪯ hi`.
    pub z: f64,
}

/// Estimates `P[lo has property]` and `P[hi has property]` from independent
/// samples and returns the one-sided z-score of their difference. Trial `t`
/// of side `s` uses `seed.derive(s).trial_rng(t)`, so the result does not
/// depend on the number of worker threads.
pub fn dominance_test(
    lo: &Model,
    hi: &Model,
    property: Property,
    k: usize,
    trials: usize,
    seed: Seed,
) -> Result<DominanceResult> {
    if trials == 0 {
        return Err(Error::param("trials must be at least 1"));
    }
    lo.validate()?;
    hi.validate()?;
    let opts = CheckOptions::default();
    let count = |model: &Model, side: u64| -> Result<usize> {
        let side_seed = seed.derive(side);
        let hits: Result<Vec<bool>> = (0..trials as u64)
            .into_par_iter()
            .map(|t| {
                let mut rng = side_seed.trial_rng(t);
                let g = model.sample_graph(&mut rng)?;
                property.holds(&g, k, &opts, &mut rng)
            })
            .collect();
        Ok(hits?.into_iter().filter(|&h| h).count())
    };
    let successes_lo = count(lo, 0)?;
    let successes_hi = count(hi, 1)?;
    let t = trials as f64;
    let (p_lo, p_hi) = (successes_lo as f64 / t, successes_hi as f64 / t);
    let se = (p_lo * (1.0 - p_lo) / t + p_hi * (1.0 - p_hi) / t).sqrt();
    let diff = p_lo - p_hi;
    let z = if se > 0.0 {
        diff / se
    } else if diff == 0.0 {
        0.0
    } else {
        diff.signum() * f64::INFINITY
    };
    Ok(DominanceResult {
        trials,
        successes_lo,
        successes_hi,
        p_lo,
        p_hi,
        z,
    })
}

/// Edge probability of a model, for marginal checks of coupled samplers.
pub fn marginal_edge_prob(model: &Model) -> Result<f64> {
    edge_prob_exact(model)
}

// SPDX-License-Identifier: Apache-2.0

//! Synchronous W-MSR consensus with locally bounded adversaries.
//!
//! Each benign node drops up to `h` neighbor values strictly above its own
//! (largest first) and up to `h` strictly below (smallest first), then moves
//! to the equal-weight average of its own value and the retained values.
//! Values equal to the node's own value are never dropped; among equal
//! extremes the lower node index is dropped first.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::rig::{Graph, Seed};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Strategy {
    Constant {
        value: f64,
    },
    /// Alternates between the two values; the starting phase is drawn from the seed.
    Oscillate {
        lo: f64,
        hi: f64,
    },
    /// Always one above the current benign maximum.
    MaxPush,
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    /// `constant:V`, `oscillate:LO:HI` or `max_push`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::param(format!("bad number {t:?} in strategy {s:?}")))
        };
        match parts.as_slice() {
            ["constant", v] => Ok(Strategy::Constant { value: num(v)? }),
            ["oscillate", lo, hi] => Ok(Strategy::Oscillate {
                lo: num(lo)?,
                hi: num(hi)?,
            }),
            ["max_push"] | ["max-push"] => Ok(Strategy::MaxPush),
            _ => Err(Error::param(format!(
                "unknown strategy {s:?}; expected constant:V, oscillate:LO:HI or max_push"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ConsensusConfig {
    pub h: usize,
    pub adversaries: Vec<usize>,
    pub strategy: Strategy,
    /// Minimum weight any retained value may receive, in (0, 1).
    pub weight_floor: f64,
    pub max_rounds: usize,
    pub tol: f64,
}

impl Default for ConsensusConfig {
    fn default() -> Self {
        ConsensusConfig {
            h: 0,
            adversaries: Vec::new(),
            strategy: Strategy::Constant { value: 0.0 },
            weight_floor: 0.01,
            max_rounds: 10_000,
            tol: 1e-6,
        }
    }
}

impl ConsensusConfig {
    pub fn validate(&self, n: usize) -> Result<()> {
        if !(self.weight_floor > 0.0 && self.weight_floor < 1.0) {
            return Err(Error::param(format!(
                "weight_floor must lie in (0, 1), got {}",
                self.weight_floor
            )));
        }
        if !(self.tol >= 0.0 && self.tol.is_finite()) {
            return Err(Error::param(format!(
                "tol must be finite and >= 0, got {}",
                self.tol
            )));
        }
        if let Some(&a) = self.adversaries.iter().find(|&&a| a >= n) {
            return Err(Error::param(format!(
                "adversary {a} out of range for n = {n}"
            )));
        }
        let finite = match self.strategy {
            Strategy::Constant { value } => value.is_finite(),
            Strategy::Oscillate { lo, hi } => lo.is_finite() && hi.is_finite(),
            Strategy::MaxPush => true,
        };
        if !finite {
            return Err(Error::param("adversary strategy values must be finite"));
        }
        Ok(())
    }

    fn adversary_mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for &a in &self.adversaries {
            mask[a] = true;
        }
        mask
    }
}

/// Every benign node has at most `h` adversarial neighbors.
pub fn is_h_local(g: &Graph, adversaries: &[usize], h: usize) -> bool {
    let mut bad = vec![false; g.node_count()];
    for &a in adversaries {
        if a < bad.len() {
            bad[a] = true;
        }
    }
    (0..g.node_count())
        .filter(|&v| !bad[v])
        .all(|v| g.neighbors(v).iter().filter(|&&u| bad[u as usize]).count() <= h)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsensusTrace {
    /// `values[t][i]` is node `i`'s value at round `t`; round 0 is the start.
    pub values: Vec<Vec<f64>>,
    /// Benign max minus benign min per round.
    pub spread: Vec<f64>,
    pub rounds_run: usize,
    pub converged: bool,
    pub benign: Vec<bool>,
    /// Every benign node had at most `h` adversarial neighbors.
    pub h_local: bool,
    /// Benign nodes whose equal weight fell below the weight floor at least once.
    pub weight_floor_violations: usize,
}

impl ConsensusTrace {
    fn benign_range(&self, round: usize) -> Option<(f64, f64)> {
        let row = &self.values[round];
        row.iter()
            .zip(&self.benign)
            .filter(|(_, &b)| b)
            .map(|(&x, _)| x)
            .fold(None, |acc, x| match acc {
                None => Some((x, x)),
                Some((lo, hi)) => Some((lo.min(x), hi.max(x))),
            })
    }

    /// Every benign value at round `t + 1` lies in the hull of the benign
    /// values at round `t`, up to rounding.
    pub fn safety_holds(&self) -> bool {
        (1..self.values.len()).all(|t| {
            let Some((lo, hi)) = self.benign_range(t - 1) else {
                return true;
            };
            let slack = 1e-12 * lo.abs().max(hi.abs()).max(1.0);
            self.values[t]
                .iter()
                .zip(&self.benign)
                .filter(|(_, &b)| b)
                .all(|(&x, _)| x >= lo - slack && x <= hi + slack)
        })
    }

    pub fn spread_monotone(&self) -> bool {
        self.spread.windows(2).all(|w| {
            let slack = 1e-12 * w[0].abs().max(1.0);
            w[1] <= w[0] + slack
        })
    }

    pub fn final_spread(&self) -> f64 {
        *self.spread.last().expect("trace has round 0")
    }
}

/// Seeded initial values, uniform on `[0, 1)`.
pub fn initial_values(n: usize, seed: Seed) -> Vec<f64> {
    let mut rng = seed.rng();
    (0..n).map(|_| rng.random::<f64>()).collect()
}

/// Closed threshold: the final benign spread is at most `tol`.
pub fn consensus_reached(trace: &ConsensusTrace, tol: f64) -> bool {
    trace.final_spread() <= tol
}

fn benign_spread(values: &[f64], benign: &[bool]) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (&x, _) in values.iter().zip(benign).filter(|(_, &b)| b) {
        lo = lo.min(x);
        hi = hi.max(x);
    }
    if lo > hi {
        0.0
    } else {
        hi - lo
    }
}

fn adversary_value(
    strategy: Strategy,
    round: usize,
    phase: usize,
    values: &[f64],
    benign: &[bool],
) -> f64 {
    match strategy {
        Strategy::Constant { value } => value,
        Strategy::Oscillate { lo, hi } => {
            if (round + phase).is_multiple_of(2) {
                lo
            } else {
                hi
            }
        }
        Strategy::MaxPush => {
            let max = values
                .iter()
                .zip(benign)
                .filter(|(_, &b)| b)
                .map(|(&x, _)| x)
                .fold(f64::NEG_INFINITY, f64::max);
            if max.is_finite() {
                max + 1.0
            } else {
                1.0
            }
        }
    }
}

/// One W-MSR step for node `v`; returns the new value and how many values
/// (including its own) were averaged.
fn filtered_update(
    g: &Graph,
    v: usize,
    h: usize,
    values: &[f64],
    scratch: &mut Vec<(f64, u32)>,
) -> (f64, usize) {
    let own = values[v];
    scratch.clear();
    scratch.extend(g.neighbors(v).iter().map(|&u| (values[u as usize], u)));
    // Ascending by value; among equal values below own the lower index comes
    // first, above own it comes last, so either end drops it first.
    scratch.sort_by(|a, b| {
        a.0.total_cmp(&b.0).then(if a.0 > own {
            b.1.cmp(&a.1)
        } else {
            a.1.cmp(&b.1)
        })
    });
    let below = scratch.iter().take_while(|e| e.0 < own).count();
    let above = scratch.iter().rev().take_while(|e| e.0 > own).count();
    let retained = &scratch[below.min(h)..scratch.len() - above.min(h)];
    let count = retained.len() + 1;
    let sum: f64 = own + retained.iter().map(|e| e.0).sum::<f64>();
    (sum / count as f64, count)
}

/// Runs synchronous rounds until the benign spread is at most `cfg.tol` or
/// `cfg.max_rounds` updates have been made.
pub fn run_filtered_consensus(
    g: &Graph,
    x0: &[f64],
    cfg: &ConsensusConfig,
    seed: Seed,
) -> Result<ConsensusTrace> {
    let n = g.node_count();
    if x0.len() != n {
        return Err(Error::InvalidInput(format!(
            "x0 has {} values for {n} nodes",
            x0.len()
        )));
    }
    if x0.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("x0 must be finite".into()));
    }
    cfg.validate(n)?;
    let adversarial = cfg.adversary_mask(n);
    let benign: Vec<bool> = adversarial.iter().map(|&a| !a).collect();
    let h_local = is_h_local(g, &cfg.adversaries, cfg.h);
    if !h_local {
        log::warn!(
            "some benign node has more than h = {} adversarial neighbors",
            cfg.h
        );
    }
    let phase = seed.rng().random_range(0..2usize);

    let mut current = x0.to_vec();
    for v in (0..n).filter(|&v| adversarial[v]) {
        current[v] = adversary_value(cfg.strategy, 0, phase, x0, &benign);
    }
    let mut values = vec![current.clone()];
    let mut spread = vec![benign_spread(&current, &benign)];
    let mut under_floor = vec![false; n];
    let mut scratch = Vec::new();
    let mut rounds_run = 0;
    while rounds_run < cfg.max_rounds && *spread.last().unwrap() > cfg.tol {
        let mut next = current.clone();
        for v in (0..n).filter(|&v| benign[v]) {
            let (x, count) = filtered_update(g, v, cfg.h, &current, &mut scratch);
            if 1.0 / (count as f64) < cfg.weight_floor {
                under_floor[v] = true;
            }
            next[v] = x;
        }
        rounds_run += 1;
        for v in (0..n).filter(|&v| adversarial[v]) {
            next[v] = adversary_value(cfg.strategy, rounds_run, phase, &next, &benign);
        }
        spread.push(benign_spread(&next, &benign));
        values.push(next.clone());
        current = next;
    }
    let weight_floor_violations = under_floor.iter().filter(|&&u| u).count();
    if weight_floor_violations > 0 {
        log::warn!(
            "{weight_floor_violations} node(s) averaged more than 1 / weight_floor = {} values",
            1.0 / cfg.weight_floor
        );
    }
    let converged = *spread.last().unwrap() <= cfg.tol;
    Ok(ConsensusTrace {
        values,
        spread,
        rounds_run,
        converged,
        benign,
        h_local,
        weight_floor_violations,
    })
}

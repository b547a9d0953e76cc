// SPDX-License-Identifier: Apache-2.0

//! Exact graph-property checks and the monotone properties used by sweeps.

mod connectivity;
mod robustness;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use connectivity::{
    connectivity_up_to, is_k_connected, local_connectivity, vertex_connectivity,
};
pub use robustness::{
    falsification_search, is_k_robust, is_k_robust_with_cap, robustness, robustness_screen,
    robustness_screen_with, robustness_with_cap, verify_witness, RobustnessVerdict, ScreenOptions,
    ScreenReason, ScreenVerdict, Witness, DEFAULT_EXHAUSTIVE_CAP, MAX_EXHAUSTIVE_CAP,
};

use crate::rig::Graph;
use crate::{Error, Result};

pub fn min_degree(g: &Graph) -> Result<usize> {
    (0..g.node_count())
        .map(|v| g.degree(v))
        .min()
        .ok_or(Error::EmptyGraph)
}

/// Monotone increasing properties scored by sweeps and dominance tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    /// k-connectivity; a single node counts as 1-connected here.
    Connectivity,
    /// Minimum degree at least k.
    MinDegree,
    /// Exact k-robustness (small graphs only).
    Robustness,
    /// Not certified non-k-robust by the one-sided screen; an upper-bound proxy
    /// for k-robustness at sizes where the exact check is infeasible.
    RobustnessScreen,
}

impl Property {
    pub const ALL: [Property; 4] = [
        Property::Connectivity,
        Property::MinDegree,
        Property::Robustness,
        Property::RobustnessScreen,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Connectivity => "connectivity",
            Property::MinDegree => "min_degree",
            Property::Robustness => "robustness",
            Property::RobustnessScreen => "robustness_screen",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.replace('-', "_");
        Property::ALL
            .into_iter()
            .find(|p| p.name() == norm)
            .ok_or_else(|| Error::param(format!("unknown property {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct CheckOptions {
    pub exhaustive_cap: usize,
    pub screen: ScreenOptions,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            exhaustive_cap: DEFAULT_EXHAUSTIVE_CAP,
            screen: ScreenOptions::default(),
        }
    }
}

impl Property {
    /// Scores `g`. The screen draws its randomness from `rng`; the exact
    /// robustness check fails with [`Error::Capacity`] above the cap.
    pub fn holds<R: Rng + ?Sized>(
        self,
        g: &Graph,
        k: usize,
        opts: &CheckOptions,
        rng: &mut R,
    ) -> Result<bool> {
        self.holds_cached(g, k, opts, rng, &mut None)
    }

    /// As [`Property::holds`], sharing one k-connectivity answer across calls on the same graph.
    pub(crate) fn holds_cached<R: Rng + ?Sized>(
        self,
        g: &Graph,
        k: usize,
        opts: &CheckOptions,
        rng: &mut R,
        k_connected: &mut Option<bool>,
    ) -> Result<bool> {
        let mut connected = || -> Result<bool> {
            if let Some(c) = *k_connected {
                return Ok(c);
            }
            let c = is_k_connected(g, k)?;
            *k_connected = Some(c);
            Ok(c)
        };
        match self {
            // At k = 1 this is plain connectedness, which a lone node has.
            Property::Connectivity if k == 1 && g.node_count() == 1 => Ok(true),
            Property::Connectivity => connected(),
            Property::MinDegree => Ok(min_degree(g)? >= k),
            Property::Robustness => Ok(is_k_robust_with_cap(g, k, opts.exhaustive_cap)?.holds),
            Property::RobustnessScreen => {
                if k == 0 {
                    return robustness_screen_with(g, k, &opts.screen, rng)
                        .map(|v| !v.is_certified_false());
                }
                let c = connected()?;
                Ok(!robustness::screen_given(g, k, &opts.screen, rng, Some(c))?
                    .is_certified_false())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_degree_examples() {
        assert_eq!(min_degree(&Graph::complete(4)).unwrap(), 3);
        let path = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(min_degree(&path).unwrap(), 1);
        assert_eq!(
            min_degree(&Graph::from_edges(3, [(0, 1)]).unwrap()).unwrap(),
            0
        );
        assert!(matches!(
            min_degree(&Graph::empty(0)),
            Err(Error::EmptyGraph)
        ));
    }

    #[test]
    fn property_names_parse() {
        for p in Property::ALL {
            assert_eq!(p.name().parse::<Property>().unwrap(), p);
        }
        assert_eq!(
            "min-degree".parse::<Property>().unwrap(),
            Property::MinDegree
        );
        assert!("girth".parse::<Property>().is_err());
    }
}

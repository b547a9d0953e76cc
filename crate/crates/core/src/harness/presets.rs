// SPDX-License-Identifier: Apache-2.0

//! Ready-made sweeps. `fig1` and `fig2` run at `n = 2000, P = 20000`, where
//! exact robustness is out of reach, so they score the one-sided screen: its
//! curve is an upper bound on the k-robustness probability. The `small_*`
//! presets stay under the exhaustive cap and score robustness exactly.

use super::SweepConfig;
use crate::props::{CheckOptions, Property, ScreenOptions};
use crate::rig::{ModelKind, Seed};

pub const PRESET_SEED: u64 = 20_000;

/// Screen candidates per graph in the `n = 2000` presets. Lower than the
/// library default so a 1000-trial figure finishes in about a minute on one
/// core; a smaller budget only loosens the upper bound.
pub const FIGURE_SCREEN_BUDGET: usize = 1000;

/// Binomial `p` grid for `fig1`; includes the critical values 4.4e-4 (k = 1)
/// and 4.9e-4 (k = 2).
pub const FIG1_GRID: [f64; 16] = [
    2.0e-4, 2.5e-4, 3.0e-4, 3.5e-4, 4.0e-4, 4.2e-4, 4.4e-4, 4.6e-4, 4.9e-4, 5.1e-4, 5.5e-4, 6.0e-4,
    6.5e-4, 7.0e-4, 7.5e-4, 8.0e-4,
];

pub const PRESET_NAMES: [&str; 4] = ["fig1", "fig2", "small_binomial", "small_uniform"];

fn large(model: ModelKind, grid: Vec<f64>, ks: Vec<usize>) -> SweepConfig {
    SweepConfig {
        model,
        n: 2000,
        pool: 20_000,
        grid,
        ks,
        properties: vec![
            Property::Connectivity,
            Property::MinDegree,
            Property::RobustnessScreen,
        ],
        trials: 1000,
        seed: Seed::new(PRESET_SEED),
        reuse_samples: true,
        check: CheckOptions {
            screen: ScreenOptions {
                budget: FIGURE_SCREEN_BUDGET,
                ..ScreenOptions::default()
            },
            ..CheckOptions::default()
        },
    }
}

/// Binomial, `p` from 2e-4 to 8e-4, `k` in {1, 2}.
pub fn preset_fig1() -> SweepConfig {
    large(ModelKind::Binomial, FIG1_GRID.to_vec(), vec![1, 2])
}

/// Uniform, `K` from 4 to 18, `k` in {2, 3}.
pub fn preset_fig2() -> SweepConfig {
    large(
        ModelKind::Uniform,
        (4..=18).map(f64::from).collect(),
        vec![2, 3],
    )
}

fn small(model: ModelKind, pool: usize, grid: Vec<f64>) -> SweepConfig {
    SweepConfig {
        model,
        n: 12,
        pool,
        grid,
        ks: vec![1, 2, 3],
        properties: vec![
            Property::Connectivity,
            Property::MinDegree,
            Property::Robustness,
        ],
        trials: 1000,
        seed: Seed::new(PRESET_SEED),
        reuse_samples: true,
        check: CheckOptions::default(),
    }
}

/// Binomial at `n = 12, P = 120`, exact robustness.
pub fn preset_small_binomial() -> SweepConfig {
    small(
        ModelKind::Binomial,
        120,
        (2..=12).map(|i| i as f64 / 100.0).collect(),
    )
}

/// Uniform at `n = 12, P = 60`, exact robustness.
pub fn preset_small_uniform() -> SweepConfig {
    small(ModelKind::Uniform, 60, (1..=8).map(f64::from).collect())
}

pub fn preset(name: &str) -> Option<SweepConfig> {
    match name.replace('-', "_").as_str() {
        "fig1" => Some(preset_fig1()),
        "fig2" => Some(preset_fig2()),
        "small_binomial" => Some(preset_small_binomial()),
        "small_uniform" => Some(preset_small_uniform()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_presets() {
        let f1 = preset_fig1();
        assert!(f1.grid.contains(&4.4e-4) && f1.grid.contains(&4.9e-4));
        assert_eq!((f1.grid[0], *f1.grid.last().unwrap()), (2e-4, 8e-4));
        let f2 = preset_fig2();
        assert!(f2.grid.contains(&10.0) && f2.grid.contains(&11.0));
        assert_eq!((f1.trials, f2.trials), (1000, 1000));
        for name in PRESET_NAMES {
            preset(name).unwrap().validate().unwrap();
        }
        assert!(preset("fig3").is_none());
    }
}

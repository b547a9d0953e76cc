// SPDX-License-Identifier: Apache-2.0

//! Seeded Monte Carlo sweeps, CSV output and figure presets.

mod presets;
mod sweep;

pub use presets::{
    preset, preset_fig1, preset_fig2, preset_small_binomial, preset_small_uniform, FIG1_GRID,
    FIGURE_SCREEN_BUDGET, PRESET_NAMES, PRESET_SEED,
};
pub use sweep::{
    estimate_probability, gnuplot_blocks, read_csv, rows_to_csv, run_sweep, wilson_interval,
    write_csv, Estimate, SweepConfig, SweepRow, CSV_HEADER,
};

// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write as _;
use std::io;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotics::alpha_from_scaling;
use crate::props::{CheckOptions, Property, MAX_EXHAUSTIVE_CAP};
use crate::rig::{Model, ModelKind, Seed};
use crate::{Error, Result};

/// Column names of the sweep CSV, in order.
pub const CSV_HEADER: &str =
    "model,n,P,param_name,param_value,k,property,trials,successes,empirical_prob,stderr,alpha_n,predicted_limit";

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

fn default_trials() -> usize {
    1000
}

fn default_true() -> bool {
    true
}

/// A Monte Carlo experiment: one model family with `n` and `P` fixed, swept
/// over `grid`, scored for every `(k, property)` pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub model: ModelKind,
    pub n: usize,
    /// Object pool size; ignored for Erdős–Rényi.
    #[serde(rename = "P", default)]
    pub pool: usize,
    pub grid: Vec<f64>,
    #[serde(rename = "k")]
    pub ks: Vec<usize>,
    pub properties: Vec<Property>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: Seed,
    /// Score one graph per trial for every `(k, property)` instead of drawing
    /// fresh graphs for each.
    #[serde(default = "default_true")]
    pub reuse_samples: bool,
    #[serde(default)]
    pub check: CheckOptions,
}

impl SweepConfig {
    pub fn param_name(&self) -> &'static str {
        self.model.param_name()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let cfg: SweepConfig = serde_json::from_str(s)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::param("grid must be nonempty"));
        }
        if self.ks.is_empty() {
            return Err(Error::param("k list must be nonempty"));
        }
        if self.ks.contains(&0) {
            return Err(Error::param("k must be at least 1"));
        }
        if self.properties.is_empty() {
            return Err(Error::param("properties must be nonempty"));
        }
        if self.trials == 0 {
            return Err(Error::param("trials must be at least 1"));
        }
        if self.n == 0 {
            return Err(Error::param("n must be at least 1"));
        }
        for &x in &self.grid {
            self.model.model(self.n, self.pool, x)?;
        }
        if self.properties.contains(&Property::Robustness) && self.n > self.check.exhaustive_cap {
            return Err(Error::param(format!(
                "exact robustness is infeasible at n = {} (exhaustive cap {}); options: use the \
                 robustness_screen property, reduce n, or raise check.exhaustive_cap (at most {})",
                self.n, self.check.exhaustive_cap, MAX_EXHAUSTIVE_CAP
            )));
        }
        if self.check.exhaustive_cap > MAX_EXHAUSTIVE_CAP {
            return Err(Error::param(format!(
                "check.exhaustive_cap = {} exceeds the maximum {MAX_EXHAUSTIVE_CAP}",
                self.check.exhaustive_cap
            )));
        }
        Ok(())
    }

    fn scored(&self) -> Vec<(usize, Property)> {
        self.ks
            .iter()
            .flat_map(|&k| self.properties.iter().map(move |&p| (k, p)))
            .collect()
    }
}

/// One CSV line: the estimate for a single `(param, k, property)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub model: String,
    pub n: usize,
    #[serde(rename = "P")]
    pub pool: usize,
    pub param_name: String,
    pub param_value: f64,
    pub k: usize,
    pub property: Property,
    pub trials: usize,
    pub successes: usize,
    pub empirical_prob: f64,
    pub stderr: f64,
    /// Empty when undefined (`n < 3`).
    pub alpha_n: Option<f64>,
    pub predicted_limit: Option<f64>,
}

impl SweepRow {
    /// `|empirical_prob - predicted_limit|`.
    pub fn deviation(&self) -> Option<f64> {
        self.predicted_limit
            .map(|p| (self.empirical_prob - p).abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    /// The property actually scored (the screen when exact robustness was infeasible).
    pub property: Property,
    pub successes: usize,
    pub trials: usize,
    pub prob: f64,
    pub stderr: f64,
    pub ci95: (f64, f64),
}

/// Wilson score interval at 95%.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let t = trials as f64;
    let p = successes as f64 / t;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / t;
    let center = (p + z2 / (2.0 * t)) / denom;
    let half = Z95 * (p * (1.0 - p) / t + z2 / (4.0 * t * t)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

fn stderr(successes: usize, trials: usize) -> f64 {
    let p = successes as f64 / trials as f64;
    (p * (1.0 - p) / trials as f64).sqrt()
}

/// Estimates `P[model has property]` from `trials` independent draws; trial
/// `t` uses `seed.trial_rng(t)`. Exact robustness above the cap falls back to
/// the screen with a warning.
pub fn estimate_probability(
    model: &Model,
    property: Property,
    k: usize,
    trials: usize,
    seed: Seed,
    opts: &CheckOptions,
) -> Result<Estimate> {
    if trials == 0 {
        return Err(Error::param("trials must be at least 1"));
    }
    if k == 0 {
        return Err(Error::param("k must be at least 1"));
    }
    model.validate()?;
    let property = if property == Property::Robustness && model.node_count() > opts.exhaustive_cap {
        log::warn!(
            "exact robustness infeasible at n = {} (cap {}); scoring robustness_screen instead",
            model.node_count(),
            opts.exhaustive_cap
        );
        Property::RobustnessScreen
    } else {
        property
    };
    let hits = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = seed.trial_rng(t);
            let g = model.sample_graph(&mut rng)?;
            property.holds(&g, k, opts, &mut rng).map(usize::from)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(Estimate {
        property,
        successes: hits,
        trials,
        prob: hits as f64 / trials as f64,
        stderr: stderr(hits, trials),
        ci95: wilson_interval(hits, trials),
    })
}

/// Success counts for one grid point, indexed like `cfg.scored()`.
fn count_point(
    cfg: &SweepConfig,
    model: &Model,
    point_seed: Seed,
    scored: &[(usize, Property)],
) -> Result<Vec<usize>> {
    let zero = || vec![0usize; scored.len()];
    let add = |mut a: Vec<usize>, b: Vec<usize>| {
        a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        a
    };
    if cfg.reuse_samples {
        (0..cfg.trials as u64)
            .into_par_iter()
            .map(|t| {
                let mut rng = point_seed.trial_rng(t);
                let g = model.sample_graph(&mut rng)?;
                let mut cached: Option<(usize, Option<bool>)> = None;
                scored
                    .iter()
                    .map(|&(k, p)| {
                        if cached.map(|c| c.0) != Some(k) {
                            cached = Some((k, None));
                        }
                        let slot = &mut cached.as_mut().expect("set above").1;
                        p.holds_cached(&g, k, &cfg.check, &mut rng, slot)
                            .map(usize::from)
                    })
                    .collect::<Result<Vec<usize>>>()
            })
            .try_reduce(zero, |a, b| Ok(add(a, b)))
    } else {
        scored
            .iter()
            .enumerate()
            .map(|(j, &(k, p))| {
                let stream = point_seed.derive(j as u64 + 1);
                (0..cfg.trials as u64)
                    .into_par_iter()
                    .map(|t| {
                        let mut rng = stream.trial_rng(t);
                        let g = model.sample_graph(&mut rng)?;
                        p.holds(&g, k, &cfg.check, &mut rng).map(usize::from)
                    })
                    .try_reduce(|| 0, |a, b| Ok(a + b))
            })
            .collect()
    }
}

/// Runs the sweep on `threads` workers (the global pool when `None`). Rows
/// come out ordered by grid point, then k, then property, and depend only on
/// the configuration.
pub fn run_sweep(cfg: &SweepConfig, threads: Option<usize>) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| Error::param(format!("cannot start {t} worker threads: {e}")))?
            .install(|| sweep_rows(cfg)),
        None => sweep_rows(cfg),
    }
}

fn sweep_rows(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    let scored = cfg.scored();
    let mut rows = Vec::with_capacity(cfg.grid.len() * scored.len());
    for (i, &x) in cfg.grid.iter().enumerate() {
        let model = cfg.model.model(cfg.n, cfg.pool, x)?;
        let counts = count_point(cfg, &model, cfg.seed.derive(i as u64), &scored)?;
        for (&(k, property), successes) in scored.iter().zip(counts) {
            let prediction = (cfg.n >= 3)
                .then(|| alpha_from_scaling(&model, k))
                .transpose()?;
            rows.push(SweepRow {
                model: cfg.model.name().to_string(),
                n: cfg.n,
                pool: cfg.pool,
                param_name: cfg.param_name().to_string(),
                param_value: x,
                k,
                property,
                trials: cfg.trials,
                successes,
                empirical_prob: successes as f64 / cfg.trials as f64,
                stderr: stderr(successes, cfg.trials),
                alpha_n: prediction.as_ref().map(|r| r.alpha_n),
                predicted_limit: prediction.as_ref().map(|r| r.predicted_limit),
            });
        }
    }
    Ok(rows)
}

pub fn write_csv<W: io::Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(CSV_HEADER.split(','))?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn rows_to_csv(rows: &[SweepRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

pub fn read_csv<R: io::Read>(input: R) -> Result<Vec<SweepRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header.join(",") != CSV_HEADER {
        return Err(Error::InvalidInput(format!(
            "unexpected sweep header {:?}",
            header.join(",")
        )));
    }
    r.deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}

/// Rows regrouped into gnuplot data blocks, one per `(k, property)`, each
/// with columns `param empirical_prob stderr predicted_limit` and separated
/// by two blank lines so `index i` selects block `i`.
pub fn gnuplot_blocks(rows: &[SweepRow]) -> String {
    let mut keys: Vec<(usize, Property)> = Vec::new();
    for r in rows {
        if !keys.contains(&(r.k, r.property)) {
            keys.push((r.k, r.property));
        }
    }
    let mut out = String::new();
    for (i, &(k, property)) in keys.iter().enumerate() {
        if i > 0 {
            out.push_str("\n\n");
        }
        let _ = writeln!(out, "# k={k} property={property}");
        out.push_str("# param empirical_prob stderr predicted_limit\n");
        for r in rows.iter().filter(|r| r.k == k && r.property == property) {
            let predicted = r
                .predicted_limit
                .map_or("NaN".to_string(), |p| p.to_string());
            let _ = writeln!(
                out,
                "{} {} {} {}",
                r.param_value, r.empirical_prob, r.stderr, predicted
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SweepConfig {
        SweepConfig {
            model: ModelKind::Binomial,
            n: 10,
            pool: 60,
            grid: vec![0.1],
            ks: vec![1, 2],
            properties: vec![
                Property::Connectivity,
                Property::MinDegree,
                Property::Robustness,
            ],
            trials: 50,
            seed: Seed::new(9),
            reuse_samples: true,
            check: CheckOptions::default(),
        }
    }

    #[test]
    fn wilson_examples() {
        let (lo, hi) = wilson_interval(0, 10);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.2 && hi < 0.35);
        let (lo, hi) = wilson_interval(50, 100);
        assert!((lo + hi - 1.0).abs() < 1e-12);
        assert!((hi - 0.5 - 0.0962).abs() < 1e-3);
    }

    #[test]
    fn single_point_gives_k_times_property_rows() {
        let rows = run_sweep(&small(), Some(1)).unwrap();
        assert_eq!(rows.len(), 6);
        let order: Vec<(usize, Property)> = rows.iter().map(|r| (r.k, r.property)).collect();
        assert_eq!(order[0], (1, Property::Connectivity));
        assert_eq!(order[5], (2, Property::Robustness));
        for r in &rows {
            assert_eq!(r.empirical_prob, r.successes as f64 / r.trials as f64);
        }
    }

    #[test]
    fn csv_is_deterministic_and_round_trips() {
        let cfg = small();
        let a = rows_to_csv(&run_sweep(&cfg, Some(1)).unwrap()).unwrap();
        let b = rows_to_csv(&run_sweep(&cfg, Some(3)).unwrap()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.lines().next().unwrap(), CSV_HEADER);
        let rows = read_csv(a.as_bytes()).unwrap();
        assert_eq!(rows, run_sweep(&cfg, None).unwrap());
        let fresh = SweepConfig {
            reuse_samples: false,
            ..cfg
        };
        let c = rows_to_csv(&run_sweep(&fresh, Some(2)).unwrap()).unwrap();
        assert_eq!(
            c,
            rows_to_csv(&run_sweep(&fresh, Some(1)).unwrap()).unwrap()
        );
    }

    #[test]
    fn config_errors() {
        let mut cfg = small();
        cfg.grid.clear();
        assert!(cfg.validate().is_err());
        let mut cfg = small();
        cfg.trials = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = small();
        cfg.properties.clear();
        assert!(cfg.validate().is_err());
        let mut cfg = small();
        cfg.n = 40;
        let msg = cfg.validate().unwrap_err().to_string();
        assert!(msg.contains("robustness_screen"), "{msg}");
    }

    #[test]
    fn json_defaults() {
        let cfg = SweepConfig::from_json(
            r#"{"model":"uniform","n":20,"P":100,"grid":[2,3],"k":[1],"properties":["connectivity"]}"#,
        )
        .unwrap();
        assert_eq!(cfg.trials, 1000);
        assert!(cfg.reuse_samples);
        assert_eq!(cfg.param_name(), "K");
    }

    #[test]
    fn estimate_examples() {
        let opts = CheckOptions::default();
        let m = Model::Binomial {
            n: 5,
            pool: 4,
            p: 1.0,
        };
        let e =
            estimate_probability(&m, Property::Connectivity, 2, 100, Seed::new(1), &opts).unwrap();
        assert_eq!(e.successes, 100);
        let m = Model::Uniform {
            n: 1,
            pool: 3,
            set_size: 1,
        };
        let e =
            estimate_probability(&m, Property::Connectivity, 1, 20, Seed::new(1), &opts).unwrap();
        assert_eq!(e.prob, 1.0);
        let big = Model::ErdosRenyi { n: 30, p: 0.5 };
        let e =
            estimate_probability(&big, Property::Robustness, 2, 5, Seed::new(1), &opts).unwrap();
        assert_eq!(e.property, Property::RobustnessScreen);
        assert!(
            estimate_probability(&big, Property::Connectivity, 1, 0, Seed::new(1), &opts).is_err()
        );
    }

    #[test]
    fn gnuplot_layout() {
        let rows = run_sweep(&small(), Some(1)).unwrap();
        let text = gnuplot_blocks(&rows);
        assert_eq!(text.matches("# k=").count(), 6);
        assert_eq!(text.matches("\n\n\n").count(), 5);
    }
}

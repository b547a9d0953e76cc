// SPDX-License-Identifier: Apache-2.0

//! The `riglab` command line.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use riglab_core::asymptotics::{alpha_from_scaling, critical_param, predicted_curve};
use riglab_core::consensus::{initial_values, run_filtered_consensus, ConsensusConfig, Strategy};
use riglab_core::coupling::{
    bracket_binomial, bracket_sample, bracket_success_binomial, dominance_test, eps_from_moments,
    nested_binomial_pair, nested_uniform_pair, p_hat_lemma7,
};
use riglab_core::harness::{
    gnuplot_blocks, preset, run_sweep, write_csv, SweepConfig, PRESET_NAMES,
};
use riglab_core::props::{
    is_k_connected, is_k_robust_with_cap, min_degree, robustness_screen_with, Property,
    ScreenOptions, ScreenVerdict, DEFAULT_EXHAUSTIVE_CAP,
};
use riglab_core::{Graph, Model, ModelKind, ObjectAssignment, Seed, SizeDistribution};

type Result<T> = anyhow::Result<T>;

#[derive(Debug, Parser)]
#[command(
    name = "riglab",
    version,
    about = "Random intersection graph laboratory"
)]
struct Cli {
    /// Base seed; sweeps default to the preset seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for parallel work.
    #[arg(long, global = true, env = "RIGLAB_THREADS")]
    threads: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format for tabular results.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a graph and print its edge list.
    Generate(GenerateArgs),
    /// Decide a property of a graph read from a file.
    Check(CheckArgs),
    /// Scaling quantity, deviation and predicted limit for one model.
    Threshold(ThresholdArgs),
    /// Predicted limit probability over a parameter grid.
    Curve(CurveArgs),
    /// Coupled samplers and coupling parameters.
    Couple {
        #[command(subcommand)]
        command: CoupleCommand,
    },
    /// Run filtered consensus and print the spread per round.
    Consensus(ConsensusArgs),
    /// Run a sweep from a JSON config or a named preset.
    Sweep(SweepArgs),
    /// Binomial transition curves at n = 2000, P = 20000.
    Fig1(FigArgs),
    /// Uniform transition curves at n = 2000, P = 20000.
    Fig2(FigArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Binomial,
    Uniform,
    General,
    Er,
}

#[derive(Debug, Args)]
struct ModelArgs {
    #[arg(long, value_enum)]
    model: ModelArg,
    #[arg(short = 'n')]
    n: usize,
    /// Object pool size (not used by er).
    #[arg(short = 'P')]
    pool: Option<usize>,
    /// Per-object probability (binomial) or edge probability (er).
    #[arg(short = 'p')]
    p: Option<f64>,
    /// Set size (uniform).
    #[arg(short = 'K')]
    set_size: Option<usize>,
    /// Set-size pmf as comma-separated probabilities for sizes 1, 2, ... (general).
    #[arg(long)]
    sizes: Option<String>,
}

impl ModelArgs {
    fn pool(&self) -> Result<usize> {
        self.pool
            .ok_or_else(|| anyhow!("{:?} model needs -P", self.model))
    }

    fn build(&self) -> Result<Model> {
        let model = match self.model {
            ModelArg::Binomial => Model::Binomial {
                n: self.n,
                pool: self.pool()?,
                p: self.p.ok_or_else(|| anyhow!("binomial model needs -p"))?,
            },
            ModelArg::Uniform => Model::Uniform {
                n: self.n,
                pool: self.pool()?,
                set_size: self
                    .set_size
                    .ok_or_else(|| anyhow!("uniform model needs -K"))?,
            },
            ModelArg::General => {
                let text = self
                    .sizes
                    .as_deref()
                    .ok_or_else(|| anyhow!("general model needs --sizes"))?;
                let pmf = text
                    .split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<f64>()
                            .with_context(|| format!("bad pmf entry {t:?}"))
                    })
                    .collect::<Result<Vec<f64>>>()?;
                Model::General {
                    n: self.n,
                    pool: self.pool()?,
                    sizes: SizeDistribution::from_pmf(pmf)?,
                }
            }
            ModelArg::Er => Model::ErdosRenyi {
                n: self.n,
                p: self.p.ok_or_else(|| anyhow!("er model needs -p"))?,
            },
        };
        model.validate()?;
        Ok(model)
    }
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Also write the object assignment as JSON.
    #[arg(long)]
    assignment_out: Option<PathBuf>,
}

/// Model flags for `consensus`, where sampling is one of several topology sources.
#[derive(Debug, Args)]
struct SampledTopology {
    /// Sample the topology from this model instead of reading it.
    #[arg(long, value_enum, requires = "n", conflicts_with_all = ["graph", "assignment"])]
    model: Option<ModelArg>,
    #[arg(short = 'n', requires = "model")]
    n: Option<usize>,
    /// Object pool size (not used by er).
    #[arg(short = 'P', requires = "model")]
    pool: Option<usize>,
    /// Per-object probability (binomial) or edge probability (er).
    #[arg(short = 'p', requires = "model")]
    p: Option<f64>,
    /// Set size (uniform).
    #[arg(short = 'K', requires = "model")]
    set_size: Option<usize>,
    /// Set-size pmf as comma-separated probabilities for sizes 1, 2, ... (general).
    #[arg(long, requires = "model")]
    sizes: Option<String>,
}

impl SampledTopology {
    fn model_args(&self) -> Option<ModelArgs> {
        Some(ModelArgs {
            model: self.model?,
            n: self.n?,
            pool: self.pool,
            p: self.p,
            set_size: self.set_size,
            sizes: self.sizes.clone(),
        })
    }
}

#[derive(Debug, Args)]
struct GraphSource {
    /// Edge-list file ("n m" header, then "i j" lines).
    #[arg(long, conflicts_with = "assignment")]
    graph: Option<PathBuf>,
    /// Object assignment JSON; the graph is its intersection graph.
    #[arg(long)]
    assignment: Option<PathBuf>,
}

impl GraphSource {
    fn load(&self) -> Result<Option<Graph>> {
        if let Some(path) = &self.graph {
            let text = read(path)?;
            return Ok(Some(
                Graph::parse_edge_list(&text)
                    .with_context(|| format!("reading {}", path.display()))?,
            ));
        }
        if let Some(path) = &self.assignment {
            let a = ObjectAssignment::from_json(&read(path)?)
                .with_context(|| format!("reading {}", path.display()))?;
            return Ok(Some(a.graph()));
        }
        Ok(None)
    }
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[command(flatten)]
    source: GraphSource,
    #[arg(long)]
    property: Property,
    #[arg(short = 'k')]
    k: usize,
    /// Largest n for exact robustness.
    #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_CAP)]
    cap: usize,
    /// Candidate pairs tried by the robustness screen.
    #[arg(long)]
    budget: Option<usize>,
}

#[derive(Debug, Args)]
struct ThresholdArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(short = 'k')]
    k: usize,
}

#[derive(Debug, Args)]
struct CurveArgs {
    #[arg(long)]
    model: ModelKind,
    #[arg(short = 'n')]
    n: usize,
    #[arg(short = 'P', default_value_t = 0)]
    pool: usize,
    #[arg(short = 'k')]
    k: usize,
    /// Comma-separated parameter values.
    #[arg(long, value_delimiter = ',', required = true)]
    grid: Vec<f64>,
}

#[derive(Debug, Subcommand)]
enum CoupleCommand {
    /// G_u(n, P, K1) inside G_u(n, P, K2).
    Uniform {
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'P')]
        pool: usize,
        #[arg(long)]
        k1: usize,
        #[arg(long)]
        k2: usize,
        /// Repeat over this many seeds and report how often nesting held.
        #[arg(long)]
        verify: Option<usize>,
    },
    /// G_b(n, P, p1) inside G_b(n, P, p2).
    Binomial {
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'P')]
        pool: usize,
        #[arg(long)]
        p1: f64,
        #[arg(long)]
        p2: f64,
        #[arg(long)]
        verify: Option<usize>,
    },
    /// Uniform bracket K-, K+ around G_b(n, P, p), with eps_n and p_hat.
    Bracket {
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'P')]
        pool: usize,
        #[arg(short = 'p')]
        p: f64,
        #[arg(long)]
        verify: Option<usize>,
    },
    /// Concentration width from set-size moments.
    Eps {
        #[arg(short = 'n')]
        n: usize,
        #[arg(long)]
        mean: f64,
        #[arg(long)]
        var: f64,
    },
    /// Erdős–Rényi parameter dominated by G_b(n, P, p).
    PHat {
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'P')]
        pool: usize,
        #[arg(short = 'p')]
        p: f64,
    },
    /// Compare G(n, p_hat) against G_b(n, P, p) on a property.
    Dominance {
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'P')]
        pool: usize,
        #[arg(short = 'p')]
        p: f64,
        #[arg(short = 'k', default_value_t = 1)]
        k: usize,
        #[arg(long, default_value = "connectivity")]
        property: Property,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
}

#[derive(Debug, Args)]
struct ConsensusArgs {
    #[command(flatten)]
    source: GraphSource,
    #[command(flatten)]
    sampled: SampledTopology,
    /// JSON config; the flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    h: Option<usize>,
    /// Comma-separated adversarial nodes.
    #[arg(long, value_delimiter = ',')]
    adversaries: Option<Vec<usize>>,
    /// constant:V, oscillate:LO:HI or max_push.
    #[arg(long)]
    strategy: Option<Strategy>,
    #[arg(long)]
    max_rounds: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// Comma-separated initial values; seeded uniform on [0, 1) when absent.
    #[arg(long, value_delimiter = ',')]
    x0: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// JSON sweep config.
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    config: Option<PathBuf>,
    /// One of fig1, fig2, small_binomial, small_uniform.
    #[arg(long)]
    preset: Option<String>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Args)]
struct FigArgs {
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Override the number of trials per point.
    #[arg(long)]
    trials: Option<usize>,
    /// Emit gnuplot data blocks instead of CSV.
    #[arg(long)]
    gnuplot: bool,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

struct Ctx {
    seed: Option<u64>,
    threads: Option<usize>,
    out: Option<PathBuf>,
    format: Option<Format>,
}

impl Ctx {
    fn seed(&self) -> Seed {
        Seed::new(self.seed.unwrap_or(0))
    }

    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => {
                fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
            }
            None => {
                let mut stdout = io::stdout().lock();
                stdout.write_all(text.as_bytes())?;
                stdout.flush()?;
                Ok(())
            }
        }
    }

    fn emit_json<T: Serialize>(&self, value: &T) -> Result<()> {
        self.emit(&format!("{}\n", serde_json::to_string_pretty(value)?))
    }

    fn table<T: Serialize>(&self, rows: &[T]) -> Result<()> {
        match self.format.unwrap_or(Format::Csv) {
            Format::Json => self.emit_json(&rows),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for r in rows {
                    w.serialize(r)?;
                }
                self.emit(&String::from_utf8(w.into_inner()?)?)
            }
        }
    }

    fn parallel<T: Send>(&self, f: impl FnOnce() -> T + Send) -> Result<T> {
        match self.threads {
            Some(t) => Ok(rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()?
                .install(f)),
            None => Ok(f()),
        }
    }
}

/// Parses `argv` (program name first), runs the command and returns the exit
/// code: 0 on success, 1 on runtime errors, 2 on usage errors.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_target(false)
        .format_timestamp(None)
        .try_init();
    let ctx = Ctx {
        seed: cli.seed,
        threads: cli.threads,
        out: cli.out,
        format: cli.format,
    };
    match run(&ctx, cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

fn run(ctx: &Ctx, command: Command) -> Result<()> {
    match command {
        Command::Generate(args) => generate(ctx, args),
        Command::Check(args) => check(ctx, args),
        Command::Threshold(args) => threshold(ctx, args),
        Command::Curve(args) => {
            let points = predicted_curve(args.model, args.n, args.pool, args.k, &args.grid)?;
            ctx.table(&points)
        }
        Command::Couple { command } => couple(ctx, command),
        Command::Consensus(args) => consensus(ctx, args),
        Command::Sweep(args) => {
            let cfg = match (&args.config, &args.preset) {
                (Some(path), _) => SweepConfig::from_json(&read(path)?)?,
                (None, Some(name)) => preset(name).ok_or_else(|| {
                    anyhow!(
                        "unknown preset {name:?}; choose one of {}",
                        PRESET_NAMES.join(", ")
                    )
                })?,
                (None, None) => bail!("sweep needs --config or --preset"),
            };
            sweep(ctx, cfg, &args.run)
        }
        Command::Fig1(args) => sweep(ctx, preset("fig1").expect("built in"), &args.run),
        Command::Fig2(args) => sweep(ctx, preset("fig2").expect("built in"), &args.run),
    }
}

fn generate(ctx: &Ctx, args: GenerateArgs) -> Result<()> {
    let model = args.model.build()?;
    let (g, assignment) = model.sample(&mut ctx.seed().rng())?;
    if let Some(path) = &args.assignment_out {
        let a = assignment
            .as_ref()
            .ok_or_else(|| anyhow!("the er model has no object assignment"))?;
        fs::write(path, a.to_json()?)
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    match ctx.format {
        Some(Format::Json) => {
            let edges: Vec<[usize; 2]> = g.edges().map(|(i, j)| [i, j]).collect();
            ctx.emit_json(&json!({ "n": g.node_count(), "edges": edges, "assignment": assignment }))
        }
        _ => ctx.emit(&g.to_edge_list()),
    }
}

fn check(ctx: &Ctx, args: CheckArgs) -> Result<()> {
    let g = args
        .source
        .load()?
        .ok_or_else(|| anyhow!("check needs --graph or --assignment"))?;
    let k = args.k;
    let start = Instant::now();
    let mut report = json!({ "property": args.property, "k": k });
    match args.property {
        Property::Connectivity => report["holds"] = json!(is_k_connected(&g, k)?),
        Property::MinDegree => report["holds"] = json!(min_degree(&g)? >= k),
        Property::Robustness => {
            let verdict = is_k_robust_with_cap(&g, k, args.cap)?;
            report["holds"] = json!(verdict.holds);
            if let Some(w) = verdict.witness {
                report["witness"] = json!(w);
            }
        }
        Property::RobustnessScreen => {
            let opts = ScreenOptions {
                budget: args.budget.unwrap_or(ScreenOptions::default().budget),
                ..ScreenOptions::default()
            };
            match robustness_screen_with(&g, k, &opts, &mut ctx.seed().rng())? {
                ScreenVerdict::CertifiedFalse { reason, witness } => {
                    report["holds"] = json!(false);
                    report["reason"] = json!(reason);
                    if let Some(w) = witness {
                        report["witness"] = json!(w);
                    }
                }
                // One-sided: surviving the screen does not establish robustness.
                ScreenVerdict::Undecided => {
                    report["holds"] = Value::Null;
                    report["verdict"] = json!("undecided");
                }
            }
        }
    }
    report["elapsed_ms"] = json!(start.elapsed().as_secs_f64() * 1e3);
    ctx.emit_json(&report)
}

fn threshold(ctx: &Ctx, args: ThresholdArgs) -> Result<()> {
    let model = args.model.build()?;
    let report = alpha_from_scaling(&model, args.k)?;
    let mut value = serde_json::to_value(&report)?;
    let kind = match args.model.model {
        ModelArg::Binomial => Some(ModelKind::Binomial),
        ModelArg::Uniform => Some(ModelKind::Uniform),
        ModelArg::Er => Some(ModelKind::ErdosRenyi),
        ModelArg::General => None,
    };
    if let Some(kind) = kind {
        let critical = critical_param(
            kind,
            model.node_count(),
            args.model.pool.unwrap_or(0),
            args.k,
        )?;
        value["critical_param"] = json!({ "name": kind.param_name(), "value": critical.value() });
    }
    ctx.emit_json(&value)
}

fn nesting_rate(
    draws: usize,
    mut holds: impl FnMut(Seed) -> Result<bool>,
    seed: Seed,
) -> Result<Value> {
    if draws == 0 {
        bail!("--verify needs at least one draw");
    }
    let mut ok = 0;
    for i in 0..draws {
        ok += usize::from(holds(seed.derive(i as u64))?);
    }
    Ok(json!({ "draws": draws, "holds": ok, "rate": ok as f64 / draws as f64 }))
}

fn couple(ctx: &Ctx, command: CoupleCommand) -> Result<()> {
    let seed = ctx.seed();
    let value = match command {
        CoupleCommand::Uniform {
            n,
            pool,
            k1,
            k2,
            verify,
        } => match verify {
            Some(d) => nesting_rate(
                d,
                |s| Ok(nested_uniform_pair(n, pool, k1, k2, s)?.subgraph_holds),
                seed,
            )?,
            None => pair_summary(&nested_uniform_pair(n, pool, k1, k2, seed)?),
        },
        CoupleCommand::Binomial {
            n,
            pool,
            p1,
            p2,
            verify,
        } => match verify {
            Some(d) => nesting_rate(
                d,
                |s| Ok(nested_binomial_pair(n, pool, p1, p2, s)?.subgraph_holds),
                seed,
            )?,
            None => pair_summary(&nested_binomial_pair(n, pool, p1, p2, seed)?),
        },
        CoupleCommand::Bracket { n, pool, p, verify } => {
            let mut value = serde_json::to_value(bracket_binomial(n, pool, p)?)?;
            match verify {
                Some(d) => {
                    value["verify"] =
                        nesting_rate(d, |s| Ok(bracket_success_binomial(n, pool, p, s)?), seed)?
                }
                None => {
                    let b = bracket_sample(n, pool, p, seed)?;
                    value["sample"] = json!({
                        "contained": b.contained,
                        "edges": [b.minus.edge_count(), b.binomial.edge_count(), b.plus.edge_count()],
                    });
                }
            }
            value
        }
        CoupleCommand::Eps { n, mean, var } => {
            serde_json::to_value(eps_from_moments(n, mean, var)?)?
        }
        CoupleCommand::PHat { n, pool, p } => serde_json::to_value(p_hat_lemma7(n, pool, p)?)?,
        CoupleCommand::Dominance {
            n,
            pool,
            p,
            k,
            property,
            trials,
        } => {
            let hat = p_hat_lemma7(n, pool, p)?;
            let lo = Model::ErdosRenyi { n, p: hat.p_hat };
            let hi = Model::Binomial { n, pool, p };
            let result = ctx.parallel(|| dominance_test(&lo, &hi, property, k, trials, seed))??;
            json!({ "p_hat": hat.p_hat, "result": result, "warnings": hat.warnings })
        }
    };
    ctx.emit_json(&value)
}

fn pair_summary(pair: &riglab_core::coupling::CoupledPair) -> Value {
    json!({
        "lo_edges": pair.lo.edge_count(),
        "hi_edges": pair.hi.edge_count(),
        "subgraph_holds": pair.subgraph_holds,
    })
}

#[derive(Serialize)]
struct TraceRow {
    round: usize,
    spread: f64,
    min: f64,
    max: f64,
}

fn consensus(ctx: &Ctx, args: ConsensusArgs) -> Result<()> {
    let seed = ctx.seed();
    let g = match (args.source.load()?, args.sampled.model_args()) {
        (Some(g), _) => g,
        (None, Some(m)) => m.build()?.sample_graph(&mut seed.derive(1).rng())?,
        (None, None) => bail!("consensus needs --graph, --assignment or a model (--model ...)"),
    };
    let mut cfg = match &args.config {
        Some(path) => serde_json::from_str::<ConsensusConfig>(&read(path)?)
            .with_context(|| format!("parsing {}", path.display()))?,
        None => ConsensusConfig::default(),
    };
    if let Some(h) = args.h {
        cfg.h = h;
    }
    if let Some(a) = args.adversaries {
        cfg.adversaries = a;
    }
    if let Some(s) = args.strategy {
        cfg.strategy = s;
    }
    if let Some(r) = args.max_rounds {
        cfg.max_rounds = r;
    }
    if let Some(t) = args.tol {
        cfg.tol = t;
    }
    let x0 = args
        .x0
        .unwrap_or_else(|| initial_values(g.node_count(), seed));
    let trace = run_filtered_consensus(&g, &x0, &cfg, seed)?;
    let rows: Vec<TraceRow> = trace
        .values
        .iter()
        .zip(&trace.spread)
        .enumerate()
        .map(|(round, (values, &spread))| {
            let benign = values
                .iter()
                .zip(&trace.benign)
                .filter(|(_, &b)| b)
                .map(|(&x, _)| x);
            let (min, max) = benign.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
                (lo.min(x), hi.max(x))
            });
            TraceRow {
                round,
                spread,
                min,
                max,
            }
        })
        .collect();
    match ctx.format {
        Some(Format::Json) => ctx.emit_json(&json!({
            "rounds_run": trace.rounds_run,
            "converged": trace.converged,
            "final_spread": trace.final_spread(),
            "h_local": trace.h_local,
            "safety_holds": trace.safety_holds(),
            "spread_monotone": trace.spread_monotone(),
            "weight_floor_violations": trace.weight_floor_violations,
            "trace": rows,
        })),
        _ => ctx.table(&rows),
    }
}

fn sweep(ctx: &Ctx, mut cfg: SweepConfig, run: &RunArgs) -> Result<()> {
    if let Some(seed) = ctx.seed {
        cfg.seed = Seed::new(seed);
    }
    if let Some(t) = run.trials {
        cfg.trials = t;
    }
    let rows = run_sweep(&cfg, ctx.threads)?;
    if run.gnuplot {
        return ctx.emit(&gnuplot_blocks(&rows));
    }
    match ctx.format {
        Some(Format::Json) => ctx.emit_json(&rows),
        _ => {
            let mut buf = Vec::new();
            write_csv(&rows, &mut buf)?;
            ctx.emit(&String::from_utf8(buf)?)
        }
    }
}

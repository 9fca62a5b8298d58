//! The `resparse` command line.
//!
//! Every command that writes files also writes a [`RunManifest`] (to
//! `--manifest PATH`, or next to the first output as `<out>.manifest.json`).
//! `resparse rerun MANIFEST` replays the stored arguments and rewrites the same
//! outputs byte for byte.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::game::{self, GameConfig, GameEnd, GameState, Randomness, StrategyKind, WinCheck};
use crate::graph::{generate, read_edge_list, write_edge_list, EdgeListReader, GraphFamily, WeightedGraph};
use crate::linalg::{dense_cap_from_env, exact_leverage, sketched_leverage_upper, spectral_epsilon_graphs};
use crate::parallel::{forest_decomposition, parallel_sparsify, ParallelConfig};
use crate::rng::RngSeed;
use crate::streaming::{stream_sparsify_graph, LeverageMode, StreamConfig};

#[derive(Debug, Parser)]
#[command(name = "resparse", version, about = "Spectral sparsification by repeated resampling")]
pub struct Cli {
    /// Master seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads. Outputs do not depend on this.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Where to write the run manifest.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a graph in edge-list format.
    Gen(GenArgs),
    /// One-pass streaming sparsification of an edge-list file.
    Stream(StreamArgs),
    /// Spanner-based parallel sparsification.
    Parallel(ParallelArgs),
    /// Measure the spectral error of H against G.
    Verify(VerifyArgs),
    /// Monte Carlo over games against a scripted adversary.
    Game(GameArgs),
    /// Re-run the command stored in a manifest.
    Rerun(RerunArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// path, cycle, complete, grid, star, barbell or gnp:P
    pub family: GraphFamily,
    pub n: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum LeverageArg {
    Exact,
    Sketched,
    Auto,
}

#[derive(Debug, Args)]
pub struct StreamArgs {
    pub input: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    #[arg(long)]
    pub beta_coeff: Option<f64>,
    #[arg(long)]
    pub buffer_coeff: Option<f64>,
    #[arg(long)]
    pub jl_delta: Option<f64>,
    #[arg(long, value_enum, default_value = "auto")]
    pub leverage: LeverageArg,
    /// Start from the small desk-scale constants instead of the proof constants.
    #[arg(long)]
    pub desk_scale: bool,
    /// Fail if the buffer ever exceeds its bound.
    #[arg(long)]
    pub assert_space: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ParallelArgs {
    pub input: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    #[arg(long)]
    pub alpha_coeff: Option<f64>,
    #[arg(long)]
    pub stop_coeff: Option<f64>,
    #[arg(long)]
    pub estimate_ratio: Option<f64>,
    #[arg(long)]
    pub c0: Option<f64>,
    #[arg(long)]
    pub ck: Option<f64>,
    #[arg(long)]
    pub t_override: Option<usize>,
    #[arg(long)]
    pub max_rounds: Option<usize>,
    #[arg(long)]
    pub desk_scale: bool,
    /// Skip the per-round spectral measurement.
    #[arg(long)]
    pub no_measure: bool,
    /// Round log CSV.
    #[arg(long)]
    pub round_log: Option<PathBuf>,
    /// Forest decomposition of the output, in edge-list blocks.
    #[arg(long)]
    pub forests: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub graph: PathBuf,
    pub sparsifier: PathBuf,
    /// Exit with a contract violation when ε* exceeds this.
    #[arg(long)]
    pub max_epsilon: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StrategyArg {
    Halving,
    Random,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Coupled,
    Fresh,
}

#[derive(Debug, Args)]
pub struct GameArgs {
    /// Rows as an edge-list file; otherwise `--family` and `--n`.
    #[arg(long, conflicts_with = "family")]
    pub rows: Option<PathBuf>,
    #[arg(long, default_value = "complete")]
    pub family: GraphFamily,
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    #[arg(long, default_value_t = 0.4)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 8.0)]
    pub c_alpha: f64,
    #[arg(long, value_enum, default_value = "halving")]
    pub strategy: StrategyArg,
    /// Move budget of the random strategy.
    #[arg(long, default_value_t = 10_000)]
    pub budget: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Only allow p ≥ 1/2.
    #[arg(long)]
    pub strict: bool,
    #[arg(long, value_enum, default_value = "coupled")]
    pub mode: ModeArg,
    /// Check the win condition every K moves instead of after every move.
    #[arg(long)]
    pub check_every: Option<usize>,
    /// Split each row into copies so it survives this many halvings. Negative disables.
    #[arg(long, default_value_t = 2, allow_negative_numbers = true)]
    pub headroom: i32,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_moves: usize,
    /// CSV histogram of α·max‖W_k‖ over trials.
    #[arg(long)]
    pub histogram: Option<PathBuf>,
    /// Move trace of trial 0 as CSV.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RerunArgs {
    pub manifest_path: PathBuf,
}

/// Everything needed to reproduce one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Arguments after the program name, without `--manifest`.
    pub args: Vec<String>,
    pub seed: u64,
    pub config: Value,
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
    pub metrics: Value,
    pub wall_time_secs: f64,
}

impl RunManifest {
    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }
}

/// What a subcommand reports back to the driver.
struct Report {
    config: Value,
    inputs: Vec<PathBuf>,
    outputs: Vec<PathBuf>,
    metrics: Value,
}

/// Runs the tool on `std::env::args` and returns the exit code.
pub fn main() -> i32 {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    run_with_exit_code(&args, &mut out)
}

/// Runs the tool on `args` (without the program name), printing to `out`.
/// Errors go to stderr. Returns 0, 1 (contract violation) or 2 (bad input).
pub fn run_with_exit_code(args: &[String], out: &mut dyn Write) -> i32 {
    let argv = std::iter::once("resparse".to_string()).chain(args.iter().cloned());
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli, args, out) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Executes parsed arguments. `raw` is stored in the manifest.
pub fn run(cli: Cli, raw: &[String], out: &mut dyn Write) -> Result<()> {
    if let Command::Rerun(r) = &cli.command {
        let m = RunManifest::read(&r.manifest_path)?;
        let mut args = m.args.clone();
        if let Some(p) = &cli.manifest {
            args.push("--manifest".into());
            args.push(p.to_string_lossy().into_owned());
        }
        let argv = std::iter::once("resparse".to_string()).chain(args.iter().cloned());
        let inner = Cli::try_parse_from(argv).map_err(|e| Error::InvalidInput(format!("manifest arguments: {e}")))?;
        if matches!(inner.command, Command::Rerun(_)) {
            return Err(Error::InvalidInput("a manifest cannot store a rerun".into()));
        }
        return run(inner, &args, out);
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    let start = Instant::now();
    let seed = RngSeed(cli.seed);
    let mut buf = Vec::new();
    let result = pool.install(|| -> Result<(&str, Report)> {
        let b = &mut buf;
        Ok(match &cli.command {
            Command::Gen(a) => ("gen", cmd_gen(a, seed, b)?),
            Command::Stream(a) => ("stream", cmd_stream(a, seed, b)?),
            Command::Parallel(a) => ("parallel", cmd_parallel(a, seed, b)?),
            Command::Verify(a) => ("verify", cmd_verify(a, b)?),
            Command::Game(a) => ("game", cmd_game(a, seed, b)?),
            Command::Rerun(_) => unreachable!(),
        })
    });
    out.write_all(&buf)?;
    let (name, report) = result?;

    let manifest_path = cli
        .manifest
        .clone()
        .or_else(|| report.outputs.first().map(|p| sibling(p, ".manifest.json")));
    if let Some(path) = manifest_path {
        let manifest = RunManifest {
            command: name.into(),
            args: strip_manifest_flag(raw),
            seed: cli.seed,
            config: report.config,
            inputs: report.inputs,
            outputs: report.outputs,
            metrics: report.metrics,
            wall_time_secs: start.elapsed().as_secs_f64(),
        };
        fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n")?;
    }
    Ok(())
}

fn sibling(p: &Path, suffix: &str) -> PathBuf {
    let mut s = p.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn strip_manifest_flag(raw: &[String]) -> Vec<String> {
    let mut out = Vec::with_capacity(raw.len());
    let mut it = raw.iter();
    while let Some(a) = it.next() {
        if a == "--manifest" {
            it.next();
        } else if !a.starts_with("--manifest=") {
            out.push(a.clone());
        }
    }
    out
}

fn read_graph(path: &Path) -> Result<WeightedGraph> {
    read_edge_list(&fs::read_to_string(path)?)
}

fn write_output(path: &Option<PathBuf>, text: &str, outputs: &mut Vec<PathBuf>) -> Result<()> {
    if let Some(p) = path {
        fs::write(p, text)?;
        outputs.push(p.clone());
    }
    Ok(())
}

fn cmd_gen(a: &GenArgs, seed: RngSeed, out: &mut Vec<u8>) -> Result<Report> {
    let g = generate(a.family, a.n, seed)?;
    let text = write_edge_list(&g);
    let mut outputs = Vec::new();
    match &a.out {
        Some(_) => write_output(&a.out, &text, &mut outputs)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(Report {
        config: json!({ "family": a.family.to_string(), "n": a.n }),
        inputs: vec![],
        outputs,
        metrics: json!({ "edges": g.m() }),
    })
}

fn cmd_stream(a: &StreamArgs, seed: RngSeed, out: &mut Vec<u8>) -> Result<Report> {
    let mut cfg = if a.desk_scale { StreamConfig::desk(a.epsilon) } else { StreamConfig::new(a.epsilon) };
    cfg.seed = seed;
    cfg.dense_cap = dense_cap_from_env();
    cfg.assert_space = a.assert_space;
    cfg.leverage = match a.leverage {
        LeverageArg::Exact => LeverageMode::Exact,
        LeverageArg::Sketched => LeverageMode::Sketched,
        LeverageArg::Auto => LeverageMode::Auto,
    };
    if let Some(v) = a.beta_coeff {
        cfg.beta_coeff = v;
    }
    if let Some(v) = a.buffer_coeff {
        cfg.buffer_coeff = v;
    }
    if let Some(v) = a.jl_delta {
        cfg.jl_delta = v;
    }

    let reader = EdgeListReader::new(BufReader::new(fs::File::open(&a.input)?))?;
    let n = reader.n();
    let (h, output) = stream_sparsify_graph(n, reader, &cfg)?;
    let s = output.stats;
    writeln!(out, "vertices          {n}")?;
    writeln!(out, "edges read        {}", s.delivered)?;
    writeln!(out, "edges kept        {}", h.m())?;
    writeln!(out, "beta              {:.4}", s.beta)?;
    writeln!(out, "threshold         {}", s.threshold)?;
    writeln!(out, "peak buffer rows  {}", s.peak_rows)?;
    writeln!(out, "resparsifications {}", s.resparsifications)?;

    let mut outputs = Vec::new();
    write_output(&a.out, &write_edge_list(&h), &mut outputs)?;
    Ok(Report {
        config: serde_json::to_value(&cfg)?,
        inputs: vec![a.input.clone()],
        outputs,
        metrics: json!({
            "n": n,
            "edges_in": s.delivered,
            "edges_out": h.m(),
            "peak_buffer_rows": s.peak_rows,
            "resparsifications": s.resparsifications,
            "threshold": s.threshold,
        }),
    })
}

fn cmd_parallel(a: &ParallelArgs, seed: RngSeed, out: &mut Vec<u8>) -> Result<Report> {
    let mut cfg = if a.desk_scale { ParallelConfig::desk(a.epsilon) } else { ParallelConfig::new(a.epsilon) };
    cfg.seed = seed;
    cfg.dense_cap = dense_cap_from_env();
    cfg.measure_epsilon = !a.no_measure;
    cfg.track_forests = a.forests.is_some();
    if let Some(v) = a.alpha_coeff {
        cfg.alpha_coeff = v;
    }
    if let Some(v) = a.stop_coeff {
        cfg.stop_coeff = v;
    }
    if let Some(v) = a.estimate_ratio {
        cfg.estimate_ratio = v;
    }
    if let Some(v) = a.c0 {
        cfg.estimate.spanner.c0 = v;
    }
    if let Some(v) = a.ck {
        cfg.estimate.c_k = v;
    }
    if a.t_override.is_some() {
        cfg.estimate.spanner.t_override = a.t_override;
    }
    if a.max_rounds.is_some() {
        cfg.max_rounds = a.max_rounds;
    }

    let g = read_graph(&a.input)?;
    let run = parallel_sparsify(&g, &cfg)?;
    let last_eps = run.rounds.last().and_then(|r| r.epsilon_star);
    writeln!(out, "vertices     {}", g.n())?;
    writeln!(out, "edges in     {}", g.m())?;
    writeln!(out, "edges out    {}", run.output.m())?;
    writeln!(out, "alpha        {:.4}", run.alpha)?;
    writeln!(out, "alpha_est    {:.4}", run.alpha_est)?;
    writeln!(out, "threshold    {:.1}", run.threshold)?;
    writeln!(out, "rounds       {}", run.rounds.len())?;
    if let Some(e) = last_eps {
        writeln!(out, "epsilon*     {e}")?;
    }

    let mut outputs = Vec::new();
    write_output(&a.out, &write_edge_list(&run.output), &mut outputs)?;
    write_output(&a.round_log, &run.round_log_csv(), &mut outputs)?;
    let mut forest_count = None;
    if a.forests.is_some() {
        let fd = forest_decomposition(&run)?;
        writeln!(out, "forests      {} ({} from spanners, {} packed)", fd.count(), fd.from_spanners, fd.packed)?;
        let mut text = format!("{} {}\n", run.output.n(), run.output.m());
        for (j, f) in fd.forests.iter().enumerate() {
            writeln!(text, "# forest {j}").unwrap();
            for &i in f {
                let e = run.output.edges()[i];
                writeln!(text, "{} {} {}", e.u, e.v, crate::graph::format_weight(e.w)).unwrap();
            }
        }
        write_output(&a.forests, &text, &mut outputs)?;
        forest_count = Some(fd.count());
    }
    Ok(Report {
        config: serde_json::to_value(&cfg)?,
        inputs: vec![a.input.clone()],
        outputs,
        metrics: json!({
            "n": g.n(),
            "edges_in": g.m(),
            "edges_out": run.output.m(),
            "rounds": run.rounds.len(),
            "epsilon_star": last_eps.map(|e| e.value),
            "forests": forest_count,
        }),
    })
}

/// Whether every edge of `h` (as an unordered endpoint pair, with
/// multiplicity) also occurs in `g`.
pub fn edges_contained(g: &WeightedGraph, h: &WeightedGraph) -> bool {
    let mut avail: HashMap<(usize, usize), usize> = HashMap::new();
    for e in g.edges() {
        *avail.entry(e.endpoints()).or_default() += 1;
    }
    h.edges().iter().all(|e| match avail.get_mut(&e.endpoints()) {
        Some(c) if *c > 0 => {
            *c -= 1;
            true
        }
        _ => false,
    })
}

fn leverage_sum(g: &WeightedGraph, cap: usize) -> Result<(f64, &'static str)> {
    if g.n() <= cap {
        Ok((exact_leverage(g, cap)?.sum(), "exact"))
    } else {
        Ok((sketched_leverage_upper(g, 0.25, RngSeed(0))?.sum(), "sketched upper bound"))
    }
}

fn cmd_verify(a: &VerifyArgs, out: &mut Vec<u8>) -> Result<Report> {
    let g = read_graph(&a.graph)?;
    let h = read_graph(&a.sparsifier)?;
    if g.n() != h.n() {
        return Err(Error::InvalidInput(format!("vertex counts differ: {} vs {}", g.n(), h.n())));
    }
    let cap = dense_cap_from_env();
    let contained = edges_contained(&g, &h);
    let eps = spectral_epsilon_graphs(&g, &h, cap)?;
    let (lg, kind_g) = leverage_sum(&g, cap)?;
    let (lh, _) = leverage_sum(&h, cap)?;
    let (cg, _) = g.components();
    let (ch, _) = h.components();
    writeln!(out, "vertices           {}", g.n())?;
    writeln!(out, "edges G            {}", g.m())?;
    writeln!(out, "edges H            {}", h.m())?;
    writeln!(out, "E(H) within E(G)   {}", if contained { "yes" } else { "no" })?;
    writeln!(out, "epsilon*           {eps}")?;
    writeln!(out, "leverage sum G     {lg:.6} ({kind_g}; n - components = {})", g.n() - cg)?;
    writeln!(out, "leverage sum H     {lh:.6} (n - components = {})", h.n() - ch)?;
    if !contained {
        return Err(Error::Contract("H has an edge that is not in G".into()));
    }
    if let Some(max) = a.max_epsilon {
        if eps.value > max {
            return Err(Error::Contract(format!("epsilon* {eps} exceeds {max}")));
        }
    }
    Ok(Report {
        config: json!({ "dense_cap": cap, "max_epsilon": a.max_epsilon }),
        inputs: vec![a.graph.clone(), a.sparsifier.clone()],
        outputs: vec![],
        metrics: json!({
            "edges_g": g.m(),
            "edges_h": h.m(),
            "epsilon_star": eps.value,
            "epsilon_exact": matches!(eps.kind, crate::linalg::EpsilonKind::Exact),
            "leverage_sum_g": lg,
            "leverage_sum_h": lh,
        }),
    })
}

/// Histogram of `values` with bins `[k·width, (k+1)·width)` from 0 up to the
/// bin holding the largest value (at least `min_top`).
fn histogram_csv(values: &[f64], width: f64, min_top: f64) -> String {
    let top = values.iter().copied().fold(min_top, f64::max);
    let bins = (top / width).floor() as usize + 1;
    let mut counts = vec![0usize; bins];
    for &v in values {
        counts[((v / width).floor() as usize).min(bins - 1)] += 1;
    }
    let mut s = String::from("bin_lo,bin_hi,count\n");
    for (k, c) in counts.iter().enumerate() {
        writeln!(s, "{},{},{}", k as f64 * width, (k + 1) as f64 * width, c).unwrap();
    }
    s
}

fn cmd_game(a: &GameArgs, seed: RngSeed, out: &mut Vec<u8>) -> Result<Report> {
    let (g, inputs) = match &a.rows {
        Some(p) => (read_graph(p)?, vec![p.clone()]),
        None => (generate(a.family, a.n, seed)?, vec![]),
    };
    let mut cfg = GameConfig::new(a.epsilon);
    cfg.c_alpha = a.c_alpha;
    cfg.strict = a.strict;
    cfg.dense_cap = dense_cap_from_env();
    cfg.randomness = match a.mode {
        ModeArg::Coupled => Randomness::Coupled,
        ModeArg::Fresh => Randomness::Fresh,
    };
    cfg.win_check = match a.check_every {
        None | Some(0) | Some(1) => WinCheck::EveryMove,
        Some(k) => WinCheck::Every(k),
    };
    let n = g.n();
    let alpha = cfg.alpha(n);
    let rows = if a.headroom >= 0 {
        game::split_rows(n, &g.rows(), alpha, a.headroom as u32, cfg.dense_cap)?
    } else {
        g.rows()
    };
    let prototype = GameState::new(n, rows, &cfg, seed)?;
    let kind = match a.strategy {
        StrategyArg::Halving => StrategyKind::Halving,
        StrategyArg::Random => StrategyKind::UniformRandom { budget: a.budget },
    };
    let summaries = game::monte_carlo(&prototype, kind, a.trials, seed, a.max_moves)?;

    let trials = summaries.len().max(1) as f64;
    let wins = summaries.iter().filter(|s| matches!(s.end, GameEnd::AdversaryWon { .. })).count();
    let capped = summaries.iter().filter(|s| matches!(s.end, GameEnd::MoveCap)).count();
    let bound = 16.0 / alpha;
    let norms: Vec<f64> = summaries.iter().map(|s| s.variation_norm).collect();
    let max_w = norms.iter().copied().fold(0.0, f64::max);
    let within = norms.iter().filter(|&&w| w <= bound).count();
    let max_eps = summaries.iter().map(|s| s.max_epsilon_star).fold(0.0, f64::max);
    let mean_moves = summaries.iter().map(|s| s.moves as f64).sum::<f64>() / trials;

    writeln!(out, "rows              {}", prototype.row_count())?;
    writeln!(out, "alpha             {alpha:.4}")?;
    writeln!(out, "trials            {}", summaries.len())?;
    writeln!(out, "adversary wins    {wins}")?;
    writeln!(out, "win rate          {:.4}", wins as f64 / trials)?;
    writeln!(out, "move cap hit      {capped}")?;
    writeln!(out, "mean moves        {mean_moves:.1}")?;
    writeln!(out, "max epsilon*      {max_eps:.6}")?;
    writeln!(out, "max ||W_k||       {max_w:.6}")?;
    writeln!(out, "16/alpha          {bound:.6}")?;
    writeln!(out, "within 16/alpha   {:.4}", within as f64 / trials)?;

    let mut outputs = Vec::new();
    if a.histogram.is_some() {
        let scaled: Vec<f64> = norms.iter().map(|w| w * alpha).collect();
        write_output(&a.histogram, &histogram_csv(&scaled, 0.5, 16.0), &mut outputs)?;
    }
    if a.trace.is_some() && a.trials > 0 {
        let (_, state) = game::play_trial(&prototype, kind, seed, 0, a.max_moves)?;
        write_output(&a.trace, &state.trace().to_csv(), &mut outputs)?;
    }
    Ok(Report {
        config: json!({ "game": serde_json::to_value(&cfg)?, "strategy": kind, "trials": a.trials,
                        "headroom": a.headroom, "max_moves": a.max_moves, "n": n }),
        inputs,
        outputs,
        metrics: json!({
            "rows": prototype.row_count(),
            "alpha": alpha,
            "wins": wins,
            "win_rate": wins as f64 / trials,
            "max_norm_w": max_w,
            "within_bound": within as f64 / trials,
            "max_epsilon_star": max_eps,
        }),
    })
}

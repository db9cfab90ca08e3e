//! The `maxcc` command line.
//!
//! Exit codes: 0 on success, 1 on usage or I/O errors, 2 when `compare`
//! finds an instance that violates the guarantee.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::graph::{generate, ColoredGraph, GeneratorParams, Model, WeightDist};
use crate::guarantee;
use crate::oracle::{brute_force, verify_report, Verdict};
use crate::solver::{solve, HalfCutStrategy, LevelOutcome, LevelRecord, SolveParams, SolveReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "maxcc", version, about = "Spectral approximation for Max Cut and Maximum Colored Cut")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve an instance with the recursive spectral algorithm.
    Solve(SolveArgs),
    /// Solve an instance exactly by enumeration (at most 24 vertices).
    Oracle(OracleArgs),
    /// Run the solver and the oracle and check the guarantee.
    Compare(CompareArgs),
    /// Write the guarantee curves as CSV.
    Curve(CurveArgs),
    /// Generate instances.
    Gen(GenArgs),
    /// Time the solver over a directory of instances.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    pub eig_tol: f64,
    /// Power-iteration cap per level (default 10 n ln n + 1000).
    #[arg(long)]
    pub eig_max_iter: Option<usize>,
    #[arg(long, value_enum, default_value_t = HalfCutStrategy::Greedy)]
    pub half_cut: HalfCutStrategy,
}

impl SolverArgs {
    pub fn params(&self) -> SolveParams {
        SolveParams {
            eig_tol: self.eig_tol,
            eig_max_iter: self.eig_max_iter,
            seed: self.seed,
            max_depth: None,
            half_cut: self.half_cut,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    /// An `.mcc` file or a directory of them.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Absolute slack on every bound.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    #[arg(long, default_value_t = 1000)]
    pub grid: usize,
    /// CSV destination; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub model: Model,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.5)]
    pub p: f64,
    #[arg(long, default_value_t = 1.0)]
    pub red_frac: f64,
    #[arg(long, value_enum, default_value_t = WeightDist::Unit)]
    pub weights: WeightDist,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of instances; more than one requires `--output` to be a
    /// directory and uses seeds `seed, seed+1, ...`.
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Directory of `.mcc` files.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(flatten)]
    pub solver: SolverArgs,
}

/// Runs a parsed command, writing results to `stdout` unless an output file
/// is given. Errors are reported on standard error.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Solve(args) => cmd_solve(&args, stdout),
        Command::Oracle(args) => cmd_oracle(&args, stdout),
        Command::Compare(args) => cmd_compare(&args, stdout),
        Command::Curve(args) => cmd_curve(&args, stdout),
        Command::Gen(args) => cmd_gen(&args, stdout),
        Command::Bench(args) => cmd_bench(&args, stdout),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            EXIT_ERROR
        }
    }
}

fn read_graph(path: &Path) -> anyhow::Result<ColoredGraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    ColoredGraph::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(output: Option<&Path>, stdout: &mut dyn Write, content: &str) -> anyhow::Result<()> {
    match output {
        Some(path) => {
            fs::write(path, content).with_context(|| format!("writing {}", path.display()))?
        }
        None => stdout.write_all(content.as_bytes())?,
    }
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn one_indexed(y: &[i8], side: i8) -> Vec<usize> {
    y.iter()
        .enumerate()
        .filter_map(|(i, &s)| (s == side).then_some(i + 1))
        .collect()
}

fn join(ids: &[usize]) -> String {
    ids.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

/// Machine-readable form of a solve. Vertex ids are 1-indexed.
#[derive(Debug, Serialize)]
pub struct SolveOutput {
    pub vertices: usize,
    pub edges: usize,
    pub total_weight: f64,
    pub good_weight: f64,
    pub ratio: f64,
    pub plus: Vec<usize>,
    pub minus: Vec<usize>,
    pub trace: Vec<LevelRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl SolveOutput {
    pub fn new(g: &ColoredGraph, report: SolveReport) -> Self {
        let note = (report.total_weight <= 0.0)
            .then(|| "graph has no edge weight; ratio taken as 1".to_string());
        Self {
            vertices: g.num_vertices(),
            edges: g.num_edges(),
            total_weight: report.total_weight,
            good_weight: report.good_weight,
            ratio: report.ratio(),
            plus: one_indexed(&report.y, 1),
            minus: one_indexed(&report.y, -1),
            trace: report.trace,
            note,
        }
    }

    fn to_text(&self) -> String {
        let mut s = String::new();
        s += &format!("vertices: {}\n", self.vertices);
        s += &format!("edges: {}\n", self.edges);
        s += &format!("total_weight: {}\n", self.total_weight);
        s += &format!("good_weight: {}\n", self.good_weight);
        s += &format!("ratio: {}\n", self.ratio);
        if let Some(note) = &self.note {
            s += &format!("note: {note}\n");
        }
        s += &format!("plus: {}\n", join(&self.plus));
        s += &format!("minus: {}\n", join(&self.minus));
        s += "trace:\n";
        for l in &self.trace {
            let outcome = match l.outcome {
                LevelOutcome::Split => "split",
                LevelOutcome::Fallback => "fallback",
                LevelOutcome::Edgeless => "edgeless",
                LevelOutcome::DepthLimit => "depth-limit",
            };
            s += &format!(
                "  depth {}: vertices {} decided {} (+{} / -{}) weight {}",
                l.depth, l.vertices, l.decided, l.plus, l.minus, l.weight
            );
            if let Some(rho) = l.rho {
                s += &format!(" rho {rho}");
            }
            if let Some(r) = l.recoverable_ratio {
                s += &format!(" recoverable {r}");
            }
            s += &format!(" {outcome}\n");
        }
        s
    }
}

pub fn cmd_solve(args: &SolveArgs, stdout: &mut dyn Write) -> anyhow::Result<i32> {
    let g = read_graph(&args.input)?;
    let report = solve(&g, &args.solver.params())?;
    let out = SolveOutput::new(&g, report);
    let content = match args.format {
        Format::Json => to_json(&out)?,
        Format::Text => out.to_text(),
    };
    emit(args.output.as_deref(), stdout, &content)?;
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct OracleOutput {
    vertices: usize,
    total_weight: f64,
    opt_value: f64,
    epsilon: f64,
    plus: Vec<usize>,
    minus: Vec<usize>,
}

pub fn cmd_oracle(args: &OracleArgs, stdout: &mut dyn Write) -> anyhow::Result<i32> {
    let g = read_graph(&args.input)?;
    let r = brute_force(&g)?;
    let out = OracleOutput {
        vertices: g.num_vertices(),
        total_weight: g.total_weight(),
        opt_value: r.opt_value,
        epsilon: r.epsilon,
        plus: one_indexed(&r.witness, 1),
        minus: one_indexed(&r.witness, -1),
    };
    let content = match args.format {
        Format::Json => to_json(&out)?,
        Format::Text => format!(
            "vertices: {}\ntotal_weight: {}\nopt_value: {}\nepsilon: {}\nplus: {}\nminus: {}\n",
            out.vertices,
            out.total_weight,
            out.opt_value,
            out.epsilon,
            join(&out.plus),
            join(&out.minus)
        ),
    };
    emit(args.output.as_deref(), stdout, &content)?;
    Ok(EXIT_OK)
}

/// `.mcc` files in a directory, sorted by name; a single file as itself.
fn instance_paths(input: &Path) -> anyhow::Result<Vec<PathBuf>> {
    if input.is_dir() {
        let mut paths: Vec<PathBuf> = fs::read_dir(input)
            .with_context(|| format!("listing {}", input.display()))?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| p.is_file() && p.extension().is_some_and(|e| e == "mcc"))
            .collect();
        paths.sort();
        if paths.is_empty() {
            bail!("no .mcc files in {}", input.display());
        }
        Ok(paths)
    } else {
        Ok(vec![input.to_path_buf()])
    }
}

fn display_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

#[derive(Debug, Serialize)]
struct CompareRow {
    instance: String,
    vertices: usize,
    #[serde(flatten)]
    verdict: Verdict,
    passed: bool,
}

#[derive(Debug, Serialize)]
struct CompareOutput {
    g_min: f64,
    tol: f64,
    instances: Vec<CompareRow>,
    min_ratio: f64,
    failures: usize,
}

pub fn cmd_compare(args: &CompareArgs, stdout: &mut dyn Write) -> anyhow::Result<i32> {
    let paths = instance_paths(&args.input)?;
    let params = args.solver.params();
    let rows = paths
        .par_iter()
        .map(|path| -> anyhow::Result<CompareRow> {
            let g = read_graph(path)?;
            let report = solve(&g, &params)?;
            let verdict = verify_report(&g, &report, args.tol)
                .with_context(|| format!("checking {}", path.display()))?;
            Ok(CompareRow {
                instance: display_name(path),
                vertices: g.num_vertices(),
                passed: verdict.passed(),
                verdict,
            })
        })
        .collect::<anyhow::Result<Vec<_>>>()?;

    let out = CompareOutput {
        g_min: guarantee::constants().g_min,
        tol: args.tol,
        min_ratio: rows.iter().map(|r| r.verdict.ratio).fold(f64::INFINITY, f64::min),
        failures: rows.iter().filter(|r| !r.passed).count(),
        instances: rows,
    };
    let content = match args.format {
        Format::Json => to_json(&out)?,
        Format::Text => {
            let mut s = format!(
                "{:<28} {:>4} {:>12} {:>12} {:>9} {:>9} {:>9}  status\n",
                "instance", "n", "opt", "alg", "ratio", "eps", "F(eps)"
            );
            for r in &out.instances {
                let v = &r.verdict;
                s += &format!(
                    "{:<28} {:>4} {:>12.6} {:>12.6} {:>9.6} {:>9.6} {:>9.6}  {}\n",
                    r.instance,
                    r.vertices,
                    v.opt_value,
                    v.alg_value,
                    v.ratio,
                    v.epsilon,
                    v.integral_bound,
                    if r.passed { "pass" } else { "FAIL" }
                );
            }
            s += &format!(
                "instances: {}  failures: {}  min ratio: {:.6}  guarantee: {:.6}\n",
                out.instances.len(),
                out.failures,
                out.min_ratio,
                out.g_min
            );
            s
        }
    };
    emit(args.output.as_deref(), stdout, &content)?;
    Ok(if out.failures == 0 { EXIT_OK } else { EXIT_VIOLATION })
}

pub fn cmd_curve(args: &CurveArgs, stdout: &mut dyn Write) -> anyhow::Result<i32> {
    let rows = guarantee::curve_table(args.grid)?;
    let mut csv = Vec::new();
    guarantee::write_curve_csv(&rows, &mut csv)?;
    let c = guarantee::constants();
    let summary = format!(
        "epsilon0: {:.10}\nepsilon_star: {:.10}\ng_min: {:.10}\n",
        c.epsilon0, c.epsilon_star, c.g_min
    );
    match &args.output {
        Some(path) => {
            fs::write(path, &csv).with_context(|| format!("writing {}", path.display()))?;
            stdout.write_all(summary.as_bytes())?;
        }
        None => {
            stdout.write_all(&csv)?;
            eprint!("{summary}");
        }
    }
    Ok(EXIT_OK)
}

pub fn cmd_gen(args: &GenArgs, stdout: &mut dyn Write) -> anyhow::Result<i32> {
    let params = GeneratorParams {
        model: args.model,
        n: args.n,
        p: args.p,
        red_fraction: args.red_frac,
        weights: args.weights,
    };
    if args.count == 0 {
        bail!("--count must be at least 1");
    }
    if args.count == 1 {
        let g = generate(&params, args.seed)?;
        emit(args.output.as_deref(), stdout, &g.serialize())?;
        return Ok(EXIT_OK);
    }
    let Some(dir) = &args.output else {
        bail!("--count > 1 requires --output <directory>");
    };
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let model = args.model.to_possible_value().map(|v| v.get_name().to_string());
    let model = model.unwrap_or_else(|| "graph".into());
    for k in 0..args.count as u64 {
        let seed = args.seed + k;
        let g = generate(&params, seed)?;
        let path = dir.join(format!("{model}-n{}-s{seed:06}.mcc", args.n));
        fs::write(&path, g.serialize()).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct BenchRow {
    instance: String,
    vertices: usize,
    edges: usize,
    total_weight: f64,
    good_weight: f64,
    ratio: f64,
    /// `good / (w(E)/2)`: improvement over the half-cut baseline.
    over_half: f64,
    levels: usize,
    fallbacks: usize,
    seconds: f64,
}

#[derive(Debug, Serialize)]
struct BenchOutput {
    instances: usize,
    min_ratio: f64,
    mean_ratio: f64,
    min_over_half: f64,
    total_seconds: f64,
    rows: Vec<BenchRow>,
}

pub fn cmd_bench(args: &BenchArgs, stdout: &mut dyn Write) -> anyhow::Result<i32> {
    if !args.input.is_dir() {
        bail!("{} is not a directory", args.input.display());
    }
    let paths = instance_paths(&args.input)?;
    let params = args.solver.params();
    let rows = paths
        .par_iter()
        .map(|path| -> anyhow::Result<BenchRow> {
            let g = read_graph(path)?;
            let start = Instant::now();
            let report = solve(&g, &params)?;
            let seconds = start.elapsed().as_secs_f64();
            let half = 0.5 * report.total_weight;
            Ok(BenchRow {
                instance: display_name(path),
                vertices: g.num_vertices(),
                edges: g.num_edges(),
                total_weight: report.total_weight,
                good_weight: report.good_weight,
                ratio: report.ratio(),
                over_half: if half > 0.0 { report.good_weight / half } else { 2.0 },
                levels: report.trace.len(),
                fallbacks: report.trace.iter().filter(|l| l.fell_back()).count(),
                seconds,
            })
        })
        .collect::<anyhow::Result<Vec<_>>>()?;

    let count = rows.len();
    let out = BenchOutput {
        instances: count,
        min_ratio: rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min),
        mean_ratio: rows.iter().map(|r| r.ratio).sum::<f64>() / count as f64,
        min_over_half: rows.iter().map(|r| r.over_half).fold(f64::INFINITY, f64::min),
        total_seconds: rows.iter().map(|r| r.seconds).sum(),
        rows,
    };
    let content = match args.format {
        Format::Json => to_json(&out)?,
        Format::Text => {
            let mut s = format!(
                "{:<28} {:>6} {:>8} {:>9} {:>9} {:>6} {:>9}\n",
                "instance", "n", "m", "ratio", "vs half", "levels", "ms"
            );
            for r in &out.rows {
                s += &format!(
                    "{:<28} {:>6} {:>8} {:>9.6} {:>9.6} {:>6} {:>9.3}\n",
                    r.instance,
                    r.vertices,
                    r.edges,
                    r.ratio,
                    r.over_half,
                    r.levels,
                    r.seconds * 1e3
                );
            }
            s += &format!(
                "instances: {}  min ratio: {:.6}  mean ratio: {:.6}  min vs half: {:.6}  solve time: {:.3}s\n",
                out.instances, out.min_ratio, out.mean_ratio, out.min_over_half, out.total_seconds
            );
            s
        }
    };
    emit(args.output.as_deref(), stdout, &content)?;
    Ok(EXIT_OK)
}

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use jigsaw_core::absorption::{find_percolating_input_with_cap, run_absorption, AbsorptionInput};
use jigsaw_core::analysis::bottleneck_root;
use jigsaw_core::construction::{
    check_event_h, construction_graph, round_percolates, run_construction, supercritical_pipeline,
};
use jigsaw_core::enumeration::{self, BoundKind};
use jigsaw_core::graph::generate_double_graph;
use jigsaw_core::harness::{
    self, bottleneck_compare, run_sweep, split_probabilities, write_records, write_sweep, OutputFormat, Split,
    SweepConfig, TrialRecord, VerifySuite,
};
use jigsaw_core::{run_jigsaw, DoubleGraph, Error, GenParams};

#[derive(Parser)]
#[command(name = "jigsaw", version, about = "Jigsaw percolation on random double graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample G(n, p1, p2) and write it in the double-graph text format.
    Gen(GenArgs),
    /// Run the jigsaw process on sampled graphs or on a graph file.
    Run(RunArgs),
    /// Percolation fractions over a list of threshold multiples c.
    Sweep(SweepArgs),
    /// Run the absorption process, or search for a percolating input.
    Absorb(AbsorbArgs),
    /// Run the supercritical construction algorithm and report on it.
    Construct(ConstructArgs),
    /// Exact counts of minimal percolating configurations against bounds.
    Enumerate(EnumerateArgs),
    /// Run the exact verification suite.
    Verify(VerifyArgs),
    /// Predicted largest subcritical cluster, optionally against simulation.
    Bottleneck(BottleneckArgs),
}

#[derive(Args)]
struct Probabilities {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p1: Option<f64>,
    #[arg(long)]
    p2: Option<f64>,
    /// Threshold multiple: p1 p2 = c / (4 n ln n), split symmetrically.
    #[arg(long)]
    c: Option<f64>,
}

impl Probabilities {
    fn n(&self) -> Result<usize> {
        self.n.ok_or_else(|| Error::param("--n is required").into())
    }

    fn resolve(&self) -> Result<(usize, f64, f64)> {
        let n = self.n()?;
        let (p1, p2) = match (self.p1, self.p2, self.c) {
            (Some(p1), Some(p2), None) => (p1, p2),
            (None, None, Some(c)) => split_probabilities(n, c, Split::Symmetric)?,
            _ => return Err(Error::param("give either --p1 and --p2, or --c").into()),
        };
        GenParams::new(n, p1, p2, 0).validate()?;
        Ok((n, p1, p2))
    }
}

#[derive(Args)]
struct Output {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: String,
}

impl Output {
    fn format(&self) -> Result<OutputFormat> {
        Ok(self.format.parse()?)
    }

    fn writer(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(path) => Box::new(BufWriter::new(
                File::create(path).with_context(|| format!("cannot write {}", path.display()))?,
            )),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    probs: Probabilities,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    probs: Probabilities,
    /// Double-graph text file; overrides sampling.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Record wall time per trial (output is then not reproducible).
    #[arg(long)]
    timing: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    n: usize,
    /// Comma-separated threshold multiples.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    c: Vec<f64>,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// symmetric or asymmetric.
    #[arg(long, default_value = "symmetric")]
    split: String,
    #[arg(long)]
    timing: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct AbsorbArgs {
    #[command(flatten)]
    probs: Probabilities,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Start vertex; runs the all-singleton input instead of searching.
    #[arg(long)]
    v1: Option<u32>,
    /// Largest graph the exhaustive search accepts.
    #[arg(long, default_value_t = 7)]
    cap: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConstructArgs {
    #[command(flatten)]
    probs: Probabilities,
    #[arg(long, default_value_t = 1.0)]
    epsilon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Proceed with a warning when the supercritical preconditions fail.
    #[arg(long)]
    force: bool,
    /// Also run the construction with the pair-query audit.
    #[arg(long)]
    audit: bool,
    /// Write the report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    l: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    /// Print only this bound's value: cayley, lemma, theorem or ineq31.
    #[arg(long)]
    bound: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// all, identities, domination, bottleneck or counting.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BottleneckArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    c: f64,
    /// Simulated trials to compare against; 0 prints the prediction only.
    #[arg(long, default_value_t = 0)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn text_writer(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Output {
        out: out.clone(),
        format: String::new(),
    }
    .writer()
}

fn read_graph(path: &PathBuf) -> Result<DoubleGraph> {
    let file = File::open(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(DoubleGraph::read_text(BufReader::new(file))?)
}

fn graph_from(input: &Option<PathBuf>, probs: &Probabilities, seed: u64) -> Result<DoubleGraph> {
    match input {
        Some(path) => read_graph(path),
        None => {
            let (n, p1, p2) = probs.resolve()?;
            Ok(generate_double_graph(&GenParams::new(n, p1, p2, seed))?)
        }
    }
}

fn gen(args: GenArgs) -> Result<()> {
    let (n, p1, p2) = args.probs.resolve()?;
    let g = generate_double_graph(&GenParams::new(n, p1, p2, args.seed))?;
    let mut w = text_writer(&args.out)?;
    g.write_text(&mut w)?;
    w.flush()?;
    Ok(())
}

fn run(args: RunArgs) -> Result<()> {
    let format = args.output.format()?;
    let writer = args.output.writer()?;
    let records = match &args.input {
        Some(path) => {
            let g = read_graph(path)?;
            let n = g.n();
            let pairs = (n * n.saturating_sub(1) / 2).max(1) as f64;
            let (p1, p2) = (g.red_edges().len() as f64 / pairs, g.blue_edges().len() as f64 / pairs);
            let result = run_jigsaw(&g);
            vec![TrialRecord {
                n,
                p1,
                p2,
                c: harness::threshold_multiple(n, p1, p2),
                trial: 0,
                seed: 0,
                percolated: result.percolated,
                rounds: result.rounds,
                max_cluster: result.max_cluster(),
                red_edges: g.red_edges().len(),
                blue_edges: g.blue_edges().len(),
                runtime_ms: 0,
            }]
        }
        None => {
            let (n, p1, p2) = args.probs.resolve()?;
            if args.trials == 0 {
                return Err(Error::param("--trials must be at least 1").into());
            }
            let (seed, trials, timing) = (args.seed, args.trials, args.timing);
            let mut records =
                harness::with_workers(args.workers, || harness::run_trials(n, p1, p2, 0, trials, seed, timing))??;
            if let Some(c) = args.probs.c {
                records.iter_mut().for_each(|r| r.c = c);
            }
            records
        }
    };
    write_records(&records, format, writer)?;
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<()> {
    let format = args.output.format()?;
    let writer = args.output.writer()?;
    let config = SweepConfig {
        n: args.n,
        c_values: args.c,
        split: args.split.parse::<Split>()?,
        trials: args.trials,
        seed: args.seed,
        workers: args.workers,
        timing: args.timing,
    };
    let out = run_sweep(&config)?;
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    for s in &out.summaries {
        eprintln!(
            "c = {}: {}/{} percolated, fraction {:.4} [{:.4}, {:.4}], mean rounds {:.2}, p95 rounds {}",
            s.c,
            s.estimate.successes,
            s.estimate.trials,
            s.estimate.fraction,
            s.estimate.ci_low,
            s.estimate.ci_high,
            s.mean_rounds,
            s.p95_rounds
        );
    }
    write_sweep(&out, format, writer)?;
    Ok(())
}

fn absorb(args: AbsorbArgs) -> Result<()> {
    let g = graph_from(&args.input, &args.probs, args.seed)?;
    let value = match args.v1 {
        Some(v1) => {
            if v1 == 0 || v1 as usize > g.n() {
                return Err(Error::param(format!("--v1 must lie in 1..={}", g.n())).into());
            }
            let input = AbsorptionInput::singletons(&g, v1);
            json!({ "input": input, "trace": run_absorption(&g, &input)? })
        }
        None => {
            let found = find_percolating_input_with_cap(&g, args.cap)?;
            let trace = found.as_ref().map(|f| run_absorption(&g, &f.input)).transpose()?;
            json!({ "percolates": jigsaw_core::percolates(&g), "found": found, "trace": trace })
        }
    };
    let mut w = text_writer(&args.out)?;
    serde_json::to_writer_pretty(&mut w, &value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn construct(args: ConstructArgs) -> Result<()> {
    let (n, p1, p2) = args.probs.resolve()?;
    let report = supercritical_pipeline(n, p1, p2, args.epsilon, args.seed, args.force)?;
    let mut w = text_writer(&args.report)?;
    let p = &report.params;
    writeln!(w, "n: {n}")?;
    writeln!(w, "p1: {p1}")?;
    writeln!(w, "p2: {p2}")?;
    writeln!(w, "epsilon: {}", p.epsilon)?;
    writeln!(w, "seed: {}", report.seed)?;
    writeln!(w, "omega: {}", p.omega)?;
    writeln!(w, "delta: {}", p.delta)?;
    writeln!(w, "eps_star: {}", p.eps_star)?;
    writeln!(w, "k0: {}", p.k0)?;
    writeln!(w, "k1: {}", p.k1)?;
    writeln!(w, "rho: {}", p.rho)?;
    writeln!(w, "p1_1: {}", p.p1_1)?;
    writeln!(w, "p1_2: {}", p.p1_2)?;
    writeln!(w, "pool_size: {}", p.pool_size)?;
    writeln!(w, "removal_budget: {}", p.removal_budget)?;
    writeln!(w, "rounds: {}", report.rounds)?;
    writeln!(w, "largest_round: {}", report.largest_round)?;
    writeln!(w, "event_h_rounds: {}", report.event_h_rounds)?;
    writeln!(w, "reached_k1: {}", report.reached_k1)?;
    writeln!(w, "main_event: {}", report.main_event)?;
    writeln!(w, "whole_graph_percolated: {}", report.percolated)?;
    for warning in &report.warnings {
        writeln!(w, "warning: {warning}")?;
    }
    if args.audit {
        let g = construction_graph(p, args.seed)?;
        let run = run_construction(&g, p, true)?;
        let audit = run.audit.expect("audit requested");
        let percolating = run
            .rounds
            .iter()
            .map(|r| round_percolates(&g, r))
            .collect::<jigsaw_core::Result<Vec<_>>>()?
            .into_iter()
            .filter(|&ok| ok)
            .count();
        let h = run.rounds.iter().filter(|r| check_event_h(r, p).holds).count();
        writeln!(w, "audit_rounds: {}", run.rounds.len())?;
        writeln!(w, "audit_percolating_rounds: {percolating}")?;
        writeln!(w, "audit_event_h_rounds: {h}")?;
        writeln!(w, "audit_red_queries: {}", audit.red_queries)?;
        writeln!(w, "audit_blue_queries: {}", audit.blue_queries)?;
        writeln!(w, "audit_query_once: {}", audit.query_once())?;
    }
    w.flush()?;
    Ok(())
}

fn enumerate(args: EnumerateArgs) -> Result<()> {
    let mut w = text_writer(&args.out)?;
    if let Some(bound) = &args.bound {
        let kind: BoundKind = bound.parse()?;
        let value = enumeration::paper_bound_value(kind, args.k, args.l.unwrap_or(args.k), args.r.unwrap_or(1))?;
        writeln!(w, "{}", json!({ "bound": kind.name(), "value": value.to_string() }))?;
    } else {
        let report = match (args.l, args.r) {
            (None, None) => enumeration::count_minimal_configs(args.k)?,
            (Some(l), None) => enumeration::count_mprime(args.k, l)?,
            (Some(l), Some(r)) => enumeration::count_mklr(args.k, l, r)?,
            (None, Some(_)) => return Err(Error::param("--r needs --l").into()),
        };
        serde_json::to_writer_pretty(&mut w, &report.to_json())?;
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

/// Returns whether every check passed.
fn verify(args: VerifyArgs) -> Result<bool> {
    let suite: VerifySuite = args.suite.parse()?;
    let outcomes = harness::verify(suite)?;
    let mut w = text_writer(&args.out)?;
    for o in &outcomes {
        writeln!(w, "{} {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail)?;
    }
    w.flush()?;
    Ok(outcomes.iter().all(|o| o.passed))
}

fn bottleneck(args: BottleneckArgs) -> Result<()> {
    if args.n < 3 {
        return Err(Error::param("--n must be at least 3").into());
    }
    let value = if args.trials == 0 {
        let nf = args.n as f64;
        let big_n = args.c / (4.0 * nf.ln());
        let root = bottleneck_root(&big_n, &nf)?;
        json!({ "n": args.n, "c": args.c, "big_n": big_n, "predicted": root, "two_ln_n": 2.0 * nf.ln() })
    } else {
        let (n, c, trials, seed) = (args.n, args.c, args.trials, args.seed);
        let report = harness::with_workers(args.workers, || bottleneck_compare(n, c, trials, seed))??;
        serde_json::to_value(report)?
    };
    let mut w = text_writer(&args.out)?;
    serde_json::to_writer_pretty(&mut w, &value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn dispatch(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Gen(a) => gen(a)?,
        Command::Run(a) => run(a)?,
        Command::Sweep(a) => sweep(a)?,
        Command::Absorb(a) => absorb(a)?,
        Command::Construct(a) => construct(a)?,
        Command::Enumerate(a) => enumerate(a)?,
        Command::Verify(a) => return verify(a),
        Command::Bottleneck(a) => bottleneck(a)?,
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if let Some(inner) = e.downcast_ref::<Error>() {
                if !inner.is_parameter_error() {
                    return ExitCode::from(3);
                }
            }
            if e.downcast_ref::<io::Error>().is_some() {
                return ExitCode::from(3);
            }
            ExitCode::from(2)
        }
    }
}

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use evolvesort_core::presets::{reproduce, Preset, ReproduceOptions};
use evolvesort_core::runner::{aggregate, run_sweep_to_csv, write_aggregate_csv, SweepGrid};
use evolvesort_core::verify::{self, Fault};
use evolvesort_core::{AdversaryKind, AlgorithmKind, ExperimentConfig, StartConfig};

/// Sorting algorithms racing an adversary that keeps changing the true order.
#[derive(Parser)]
#[command(name = "evolvesort", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment (repeated over consecutive seeds) and write CSVs.
    Run(RunArgs),
    /// Run the cartesian product of the given values.
    Sweep(SweepArgs),
    /// Run a named experiment grid.
    Reproduce(ReproduceArgs),
    /// Cross-check the distance tracker and the sorters against oracles.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Output {
    /// Output directory.
    #[arg(long, env = "EVOLVESORT_OUT", default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value = "insertion")]
    algo: AlgorithmKind,
    #[arg(long, default_value = "uniform")]
    adversary: AdversaryKind,
    /// Swaps per comparison (uniform adversary).
    #[arg(long, default_value_t = 1)]
    r: u32,
    #[arg(long, default_value = "sorted")]
    start: StartConfig,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Defaults to n^2.
    #[arg(long)]
    max_steps: Option<u64>,
    /// Defaults to max(1, n / 20).
    #[arg(long)]
    sample_interval: Option<u64>,
    #[arg(long, default_value_t = 1)]
    reps: u32,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// JSON experiment config; replaces the other experiment flags.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_delimiter = ',', default_value = "1000")]
    n: Vec<usize>,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "insertion,cocktail,bubble,quicksort,blocksort"
    )]
    algo: Vec<AlgorithmKind>,
    #[arg(long, default_value = "uniform")]
    adversary: AdversaryKind,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    r: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_value = "sorted")]
    start: Vec<StartConfig>,
    /// First seed; repetitions use consecutive seeds.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    reps: u32,
    #[arg(long)]
    max_steps: Option<u64>,
    #[arg(long)]
    sample_interval: Option<u64>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// JSON sweep grid; replaces the other grid flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// File name prefix of the CSVs.
    #[arg(long, default_value = "sweep")]
    name: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct ReproduceArgs {
    /// One of: fig-algs, fig-rvssize, fig-startconfig, fig-hot,
    /// fig-swapratio, table-conv, table-ratio.
    preset: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Replaces the preset's repetition count.
    #[arg(long)]
    reps: Option<u32>,
    /// Replaces every list size of the preset.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    max_steps: Option<u64>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 64)]
    n: usize,
    #[arg(long, default_value_t = 10_000)]
    ops: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Corrupt the tracker at this operation (self-test of the checker).
    #[arg(long, hide = true)]
    inject_fault: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Reproduce(args) => cmd_reproduce(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn cmd_run(args: RunArgs) -> anyhow::Result<bool> {
    let base = match &args.config {
        Some(path) => read_json(path)?,
        None => {
            let mut cfg = ExperimentConfig::new(
                args.n,
                args.algo,
                args.adversary.with_rate(args.r),
                args.start,
            )
            .with_seed(args.seed)
            .with_repetitions(args.reps);
            cfg.max_steps = args.max_steps;
            cfg.sample_interval = args.sample_interval;
            cfg
        }
    };
    base.validate()?;
    let configs = base.expand();
    let stem = format!("run-{}", base.run_id());
    let report = run_sweep_to_csv(&configs, args.workers, &args.output.out, &stem)?;
    for row in &report.rows {
        println!(
            "{}: ratio={:.3} steady_tau={:.1} convergence_time={} good_over_bad={}",
            row.run_id,
            row.ratio,
            row.steady_mean_tau,
            row.convergence_time,
            row.good_over_bad
                .map_or("n/a".into(), |g| format!("{g:.3}"))
        );
    }
    report_failures(&report.failures)?;
    println!(
        "wrote {} and {}",
        report.files.samples.display(),
        report.files.summary.display()
    );
    Ok(true)
}

fn cmd_sweep(args: SweepArgs) -> anyhow::Result<bool> {
    let grid = match &args.config {
        Some(path) => read_json(path)?,
        None => SweepGrid {
            n: args.n,
            r: args.r,
            adversary: args.adversary,
            algorithms: args.algo,
            starts: args.start,
            seeds: (0..args.reps as u64).map(|k| args.seed + k).collect(),
            max_steps: args.max_steps,
            sample_interval: args.sample_interval,
        },
    };
    let configs = grid.configs()?;
    for cfg in &configs {
        cfg.validate()?;
    }
    let report = run_sweep_to_csv(&configs, args.workers, &args.output.out, &args.name)?;
    let rows = aggregate(&report.rows);
    let aggregate_path = args.output.out.join(format!("{}_aggregate.csv", args.name));
    write_aggregate_csv(&aggregate_path, &rows)?;
    for row in &rows {
        println!(
            "{} {} r={} n={} {}: mean ratio={:.3} mean convergence_time={:.0} runs={}",
            row.algorithm,
            row.adversary,
            row.r,
            row.n,
            row.start,
            row.mean_ratio,
            row.mean_convergence_time,
            row.runs
        );
    }
    report_failures(&report.failures)?;
    println!(
        "wrote {}, {} and {}",
        report.files.samples.display(),
        report.files.summary.display(),
        aggregate_path.display()
    );
    Ok(true)
}

fn report_failures(failures: &[(ExperimentConfig, String)]) -> anyhow::Result<()> {
    for (cfg, err) in failures {
        eprintln!("failed {}: {err}", cfg.run_id());
    }
    if !failures.is_empty() {
        bail!("{} run(s) failed", failures.len());
    }
    Ok(())
}

fn cmd_reproduce(args: ReproduceArgs) -> anyhow::Result<bool> {
    let preset: Preset = match args.preset.parse() {
        Ok(p) => p,
        Err(err) => {
            let names: Vec<&str> = Preset::ALL.iter().map(|p| p.name()).collect();
            bail!("{err}; valid presets: {}", names.join(", "));
        }
    };
    let opts = ReproduceOptions {
        seed: args.seed,
        repetitions: args.reps,
        n: args.n,
        max_steps: args.max_steps,
        workers: args.workers,
    };
    let report = reproduce(preset, &args.output.out, &opts)?;
    report_failures(&report.failures)?;
    println!("{preset}: {} cells", report.aggregate_rows.len());
    for path in report.files() {
        println!("wrote {}", path.display());
    }
    Ok(true)
}

fn cmd_verify(args: VerifyArgs) -> anyhow::Result<bool> {
    if let Some(at_op) = args.inject_fault {
        let report =
            verify::oracle_check(args.n, args.ops, args.seed, Some(Fault { at_op, delta: 1 }))?;
        println!("{report}");
        return Ok(report.passed());
    }
    let (ok, lines) = verify::transcript(args.n, args.ops, args.seed)?;
    for line in lines {
        println!("{line}");
    }
    println!(
        "{}",
        if ok {
            "all properties passed"
        } else {
            "FAILED"
        }
    );
    Ok(ok)
}

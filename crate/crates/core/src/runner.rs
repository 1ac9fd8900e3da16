//! Experiment orchestration: configuration, seeded runs, sweeps and CSV
//! output.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;

use serde::{Deserialize, Serialize};

use crate::adversaries::{Adversary, AdversaryKind, MutationReport, HOTSPOT_BOUNDARY};
use crate::algorithms::{AlgorithmKind, Sorter};
use crate::error::{Error, Result};
use crate::metrics::{self, Sample, SteadySummary, DEFAULT_WINDOW_FRACTION};
use crate::model::{Model, SimClock, StartConfig};
use crate::rng::{self, Stream};

pub const DEFAULT_REPETITIONS: u32 = 5;

fn default_repetitions() -> u32 {
    1
}

/// One experiment, possibly repeated over consecutive seeds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub algorithm: AlgorithmKind,
    pub adversary: Adversary,
    pub start: StartConfig,
    pub seed: u64,
    /// Defaults to `n^2`.
    #[serde(default)]
    pub max_steps: Option<u64>,
    /// Defaults to `max(1, n / 20)`.
    #[serde(default)]
    pub sample_interval: Option<u64>,
    #[serde(default = "default_repetitions")]
    pub repetitions: u32,
}

impl ExperimentConfig {
    pub fn new(
        n: usize,
        algorithm: AlgorithmKind,
        adversary: Adversary,
        start: StartConfig,
    ) -> Self {
        Self {
            n,
            algorithm,
            adversary,
            start,
            seed: 0,
            max_steps: None,
            sample_interval: None,
            repetitions: 1,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_max_steps(mut self, steps: u64) -> Self {
        self.max_steps = Some(steps);
        self
    }

    pub fn with_repetitions(mut self, reps: u32) -> Self {
        self.repetitions = reps;
        self
    }

    pub fn effective_max_steps(&self) -> u64 {
        self.max_steps.unwrap_or((self.n as u64) * (self.n as u64))
    }

    pub fn effective_sample_interval(&self) -> u64 {
        self.sample_interval
            .unwrap_or_else(|| (self.n as u64 / 20).max(1))
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidConfig(format!(
                "n must be at least 2 (got {})",
                self.n
            )));
        }
        if self.n > u32::MAX as usize {
            return Err(Error::InvalidConfig(format!("n = {} is too large", self.n)));
        }
        if self.effective_max_steps() < 1 {
            return Err(Error::InvalidConfig("max_steps must be at least 1".into()));
        }
        if self.effective_sample_interval() < 1 {
            return Err(Error::InvalidConfig(
                "sample_interval must be at least 1".into(),
            ));
        }
        if self.repetitions < 1 {
            return Err(Error::InvalidConfig(
                "repetitions must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// One single-run config per repetition, seeds `seed, seed + 1, ...`,
    /// with defaults resolved.
    pub fn expand(&self) -> Vec<ExperimentConfig> {
        (0..self.repetitions as u64)
            .map(|rep| ExperimentConfig {
                seed: self.seed.wrapping_add(rep),
                max_steps: Some(self.effective_max_steps()),
                sample_interval: Some(self.effective_sample_interval()),
                repetitions: 1,
                ..self.clone()
            })
            .collect()
    }

    pub fn run_id(&self) -> String {
        format!(
            "{}-{}-r{}-n{}-{}-s{}",
            self.algorithm,
            self.adversary.name(),
            self.adversary.rate(),
            self.n,
            self.start,
            self.seed
        )
    }
}

/// Samples and summary of a single run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub run_id: String,
    pub config: ExperimentConfig,
    pub samples: Vec<Sample>,
    pub summary: SteadySummary,
    /// Good-to-bad adversary swap ratio over the steady window; `None` when
    /// no harmful swap happened there.
    pub good_over_bad: Option<f64>,
}

impl RunRecord {
    pub fn summary_row(&self) -> SummaryRow {
        SummaryRow {
            run_id: self.run_id.clone(),
            algorithm: self.config.algorithm,
            adversary: self.config.adversary.name(),
            n: self.config.n,
            r: self.config.adversary.rate(),
            start: self.config.start,
            seed: self.config.seed,
            steady_mean_tau: self.summary.steady_mean_tau,
            ratio: self.summary.ratio,
            convergence_time: self.summary.convergence_time,
            good_over_bad: self.good_over_bad,
        }
    }
}

/// Executes one run with `cfg.seed`; repetitions are ignored (see
/// [`ExperimentConfig::expand`]).
pub fn run_once(cfg: &ExperimentConfig) -> Result<RunRecord> {
    cfg.validate()?;
    let max_steps = cfg.effective_max_steps();
    let interval = cfg.effective_sample_interval();

    let mut model = Model::with_start(
        cfg.start,
        cfg.n,
        &mut rng::stream(cfg.seed, Stream::Shuffle),
    )?;
    let mut sorter = Sorter::new(
        cfg.algorithm,
        &mut model,
        rng::stream(cfg.seed, Stream::Algorithm),
    )?;
    let mut adversary_rng = rng::stream(cfg.seed, Stream::Adversary);
    let mut clock = SimClock::default();
    let mut mutations = MutationReport::default();

    let capacity = (max_steps / interval) as usize + 2;
    let mut samples = Vec::with_capacity(capacity);
    let sample = |t: u64, model: &Model, m: &MutationReport, sorter: &Sorter| Sample {
        t,
        tau: model.tau(),
        good_cum: m.good,
        bad_cum: m.bad,
        rounds: sorter.round_completed(),
    };
    samples.push(sample(0, &model, &mutations, &sorter));
    while clock.now() < max_steps {
        sorter.step(&mut model)?;
        mutations.merge(cfg.adversary.mutate(&mut model, &mut adversary_rng));
        clock.tick();
        let t = clock.now();
        if t % interval == 0 || t == max_steps {
            samples.push(sample(t, &model, &mutations, &sorter));
        }
    }

    let summary = metrics::summarize_run(&samples, cfg.n, DEFAULT_WINDOW_FRACTION)?;
    let window_start = samples
        .iter()
        .position(|s| s.t == summary.steady_window.0)
        .expect("window starts on a sample");
    let good_over_bad =
        metrics::good_swap_fraction_between(&samples[window_start], &samples[samples.len() - 1])
            .ok();
    Ok(RunRecord {
        run_id: cfg.run_id(),
        config: cfg.clone(),
        samples,
        summary,
        good_over_bad,
    })
}

/// Row of the summary CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub run_id: String,
    pub algorithm: AlgorithmKind,
    pub adversary: &'static str,
    pub n: usize,
    pub r: u32,
    pub start: StartConfig,
    pub seed: u64,
    pub steady_mean_tau: f64,
    pub ratio: f64,
    pub convergence_time: u64,
    pub good_over_bad: Option<f64>,
}

#[derive(Serialize)]
struct SampleRow<'a> {
    run_id: &'a str,
    algorithm: AlgorithmKind,
    adversary: &'static str,
    n: usize,
    r: u32,
    start: StartConfig,
    seed: u64,
    t: u64,
    tau: u64,
    good_cum: u64,
    bad_cum: u64,
    rounds: u64,
}

/// Cartesian grid of experiments.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub n: Vec<usize>,
    pub r: Vec<u32>,
    pub adversary: AdversaryKind,
    pub algorithms: Vec<AlgorithmKind>,
    pub starts: Vec<StartConfig>,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub max_steps: Option<u64>,
    #[serde(default)]
    pub sample_interval: Option<u64>,
}

impl SweepGrid {
    /// Grid order: algorithm, n, r, start, seed (last varies fastest).
    /// Hot-spot grids ignore `r`.
    pub fn configs(&self) -> Result<Vec<ExperimentConfig>> {
        let rates: Vec<u32> = match self.adversary {
            AdversaryKind::Uniform => self.r.clone(),
            AdversaryKind::Hotspot => vec![1],
        };
        let mut out = Vec::new();
        for &algorithm in &self.algorithms {
            for &n in &self.n {
                for &r in &rates {
                    for &start in &self.starts {
                        for &seed in &self.seeds {
                            let cfg = ExperimentConfig {
                                n,
                                algorithm,
                                adversary: self.adversary.with_rate(r),
                                start,
                                seed,
                                max_steps: self.max_steps,
                                sample_interval: self.sample_interval,
                                repetitions: 1,
                            };
                            out.push(cfg.expand().remove(0));
                        }
                    }
                }
            }
        }
        if out.is_empty() {
            return Err(Error::InvalidConfig("empty sweep grid".into()));
        }
        Ok(out)
    }
}

/// Result of one configuration in a sweep.
pub type SweepOutcome = std::result::Result<RunRecord, (ExperimentConfig, Error)>;

/// Runs `configs` on up to `workers` threads and hands each outcome to
/// `sink` in input order, as soon as it and all earlier ones are done.
pub fn run_sweep_with<F>(configs: &[ExperimentConfig], workers: usize, mut sink: F) -> Result<()>
where
    F: FnMut(usize, SweepOutcome) -> Result<()>,
{
    let workers = workers.clamp(1, configs.len().max(1));
    if workers == 1 {
        for (idx, cfg) in configs.iter().enumerate() {
            sink(idx, run_once(cfg).map_err(|e| (cfg.clone(), e)))?;
        }
        return Ok(());
    }
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<(usize, SweepOutcome)>();
    std::thread::scope(|scope| {
        for _ in 0..workers {
            let tx = tx.clone();
            let next = &next;
            scope.spawn(move || loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                let Some(cfg) = configs.get(idx) else { break };
                let outcome = run_once(cfg).map_err(|e| (cfg.clone(), e));
                if tx.send((idx, outcome)).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        let mut pending = BTreeMap::new();
        let mut expected = 0;
        for (idx, outcome) in rx {
            pending.insert(idx, outcome);
            while let Some(outcome) = pending.remove(&expected) {
                sink(expected, outcome)?;
                expected += 1;
            }
        }
        Ok(())
    })
}

/// Runs every configuration and keeps all records in memory.
pub fn run_sweep(configs: &[ExperimentConfig], workers: usize) -> Vec<SweepOutcome> {
    let mut out = Vec::with_capacity(configs.len());
    run_sweep_with(configs, workers, |_, outcome| {
        out.push(outcome);
        Ok(())
    })
    .expect("collecting sink never fails");
    out
}

/// Paths written by a [`CsvSink`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputFiles {
    pub samples: PathBuf,
    pub summary: PathBuf,
}

/// Streams run records into a samples CSV and a summary CSV, both headed by
/// a `#` comment block echoing every configuration.
pub struct CsvSink {
    samples: csv::Writer<BufWriter<File>>,
    summary: csv::Writer<BufWriter<File>>,
    files: OutputFiles,
}

impl CsvSink {
    pub fn create(dir: &Path, stem: &str, configs: &[ExperimentConfig]) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        let files = OutputFiles {
            samples: dir.join(format!("{stem}_samples.csv")),
            summary: dir.join(format!("{stem}_summary.csv")),
        };
        let samples = Self::open(&files.samples, "samples", configs)?;
        let summary = Self::open(&files.summary, "summary", configs)?;
        Ok(Self {
            samples,
            summary,
            files,
        })
    }

    fn open(
        path: &Path,
        what: &str,
        configs: &[ExperimentConfig],
    ) -> Result<csv::Writer<BufWriter<File>>> {
        let mut w = BufWriter::new(File::create(path)?);
        write_header_block(&mut w, what, configs)?;
        Ok(csv::WriterBuilder::new().from_writer(w))
    }

    pub fn write(&mut self, record: &RunRecord) -> Result<()> {
        let cfg = &record.config;
        for s in &record.samples {
            self.samples.serialize(SampleRow {
                run_id: &record.run_id,
                algorithm: cfg.algorithm,
                adversary: cfg.adversary.name(),
                n: cfg.n,
                r: cfg.adversary.rate(),
                start: cfg.start,
                seed: cfg.seed,
                t: s.t,
                tau: s.tau,
                good_cum: s.good_cum,
                bad_cum: s.bad_cum,
                rounds: s.rounds,
            })?;
        }
        self.summary.serialize(record.summary_row())?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<OutputFiles> {
        self.samples.flush()?;
        self.summary.flush()?;
        Ok(self.files)
    }
}

fn write_header_block(w: &mut impl Write, what: &str, configs: &[ExperimentConfig]) -> Result<()> {
    writeln!(w, "# evolvesort {what}")?;
    writeln!(w, "# seed-split: {}", rng::SPLIT_RULE)?;
    writeln!(
        w,
        "# hotspot-boundary: {}",
        serde_json::to_string(&HOTSPOT_BOUNDARY)?.trim_matches('"')
    )?;
    writeln!(w, "# steady-window-fraction: {DEFAULT_WINDOW_FRACTION}")?;
    for cfg in configs {
        writeln!(w, "# config: {}", serde_json::to_string(cfg)?)?;
    }
    Ok(())
}

/// Sweeps `configs` into CSVs under `dir`. Failed configurations are
/// reported in the returned list without aborting the sweep.
pub fn run_sweep_to_csv(
    configs: &[ExperimentConfig],
    workers: usize,
    dir: &Path,
    stem: &str,
) -> Result<SweepReport> {
    let mut sink = CsvSink::create(dir, stem, configs)?;
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    run_sweep_with(configs, workers, |_, outcome| {
        match outcome {
            Ok(record) => {
                sink.write(&record)?;
                rows.push(record.summary_row());
            }
            Err((cfg, err)) => failures.push((cfg, err.to_string())),
        }
        Ok(())
    })?;
    let files = sink.finish()?;
    Ok(SweepReport {
        files,
        rows,
        failures,
    })
}

#[derive(Debug)]
pub struct SweepReport {
    pub files: OutputFiles,
    pub rows: Vec<SummaryRow>,
    pub failures: Vec<(ExperimentConfig, String)>,
}

/// Mean summary over the repetitions of one (algorithm, adversary, n, start)
/// cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateRow {
    pub algorithm: AlgorithmKind,
    pub adversary: &'static str,
    pub n: usize,
    pub r: u32,
    pub start: StartConfig,
    pub runs: usize,
    pub mean_steady_tau: f64,
    pub mean_ratio: f64,
    pub mean_convergence_time: f64,
    pub mean_good_over_bad: Option<f64>,
}

/// Groups summary rows by everything but the seed, keeping first-seen order.
pub fn aggregate(rows: &[SummaryRow]) -> Vec<AggregateRow> {
    let mut order: Vec<(AlgorithmKind, &'static str, usize, u32, StartConfig)> = Vec::new();
    let mut groups: BTreeMap<usize, Vec<&SummaryRow>> = BTreeMap::new();
    for row in rows {
        let key = (row.algorithm, row.adversary, row.n, row.r, row.start);
        let idx = match order.iter().position(|k| *k == key) {
            Some(i) => i,
            None => {
                order.push(key);
                order.len() - 1
            }
        };
        groups.entry(idx).or_default().push(row);
    }
    groups
        .into_iter()
        .map(|(idx, members)| {
            let (algorithm, adversary, n, r, start) = order[idx];
            let k = members.len() as f64;
            let mean =
                |f: &dyn Fn(&SummaryRow) -> f64| members.iter().map(|m| f(m)).sum::<f64>() / k;
            let gob: Vec<f64> = members.iter().filter_map(|m| m.good_over_bad).collect();
            AggregateRow {
                algorithm,
                adversary,
                n,
                r,
                start,
                runs: members.len(),
                mean_steady_tau: mean(&|m| m.steady_mean_tau),
                mean_ratio: mean(&|m| m.ratio),
                mean_convergence_time: mean(&|m| m.convergence_time as f64),
                mean_good_over_bad: (gob.len() == members.len())
                    .then(|| gob.iter().sum::<f64>() / gob.len() as f64),
            }
        })
        .collect()
}

pub fn write_aggregate_csv(path: &Path, rows: &[AggregateRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

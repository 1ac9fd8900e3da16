//! Named experiment grids with their table layouts.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::adversaries::Adversary;
use crate::algorithms::AlgorithmKind;
use crate::error::{Error, Result};
use crate::model::StartConfig;
use crate::runner::{
    aggregate, run_sweep_to_csv, write_aggregate_csv, AggregateRow, ExperimentConfig,
    DEFAULT_REPETITIONS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    /// Five algorithms, uniform r = 1, shuffled start.
    FigAlgs,
    /// Steady ratio against n for insertion and quicksort, r in {1, 2, 10}.
    FigRvsSize,
    /// Four start configurations at r = 256.
    FigStartConfig,
    /// Hot-spot against uniform r = 1 mutations.
    FigHot,
    /// Good-to-bad swap ratio as r grows.
    FigSwapRatio,
    /// Convergence time of insertion and quicksort, r = 0..=10.
    TableConv,
    /// Steady ratio of all five algorithms over a range of r.
    TableRatio,
}

impl Preset {
    pub const ALL: [Preset; 7] = [
        Preset::FigAlgs,
        Preset::FigRvsSize,
        Preset::FigStartConfig,
        Preset::FigHot,
        Preset::FigSwapRatio,
        Preset::TableConv,
        Preset::TableRatio,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::FigAlgs => "fig-algs",
            Preset::FigRvsSize => "fig-rvssize",
            Preset::FigStartConfig => "fig-startconfig",
            Preset::FigHot => "fig-hot",
            Preset::FigSwapRatio => "fig-swapratio",
            Preset::TableConv => "table-conv",
            Preset::TableRatio => "table-ratio",
        }
    }

    /// Rates used by the ratio table.
    pub fn table_ratio_rates() -> Vec<u32> {
        (1..=20).chain(40..=50).chain([100, 256]).collect()
    }

    fn default_repetitions(self) -> u32 {
        match self {
            // up to n = 10^4 with n^2 steps per run
            Preset::FigRvsSize => 1,
            _ => DEFAULT_REPETITIONS,
        }
    }

    /// Every configuration of the preset, repetitions expanded.
    pub fn configs(self, opts: &ReproduceOptions) -> Vec<ExperimentConfig> {
        use AlgorithmKind::{Insertion, Quicksort};
        let sizes = |default: Vec<usize>| opts.n.map(|n| vec![n]).unwrap_or(default);
        let uniform = |r| Adversary::Uniform { r };
        let mut cells: Vec<(usize, AlgorithmKind, Adversary, StartConfig)> = Vec::new();
        match self {
            Preset::FigAlgs => {
                for n in sizes(vec![1000]) {
                    for a in AlgorithmKind::MAIN_SET {
                        cells.push((n, a, uniform(1), StartConfig::Shuffled));
                    }
                }
            }
            Preset::FigRvsSize => {
                for a in [Insertion, Quicksort] {
                    for r in [1, 2, 10] {
                        for n in sizes((1..=10).map(|k| k * 1000).collect()) {
                            cells.push((n, a, uniform(r), StartConfig::Sorted));
                        }
                    }
                }
            }
            Preset::FigStartConfig => {
                for n in sizes(vec![1000]) {
                    for a in [Insertion, Quicksort] {
                        for start in StartConfig::ALL {
                            cells.push((n, a, uniform(256), start));
                        }
                    }
                }
            }
            Preset::FigHot => {
                for n in sizes(vec![1000]) {
                    for adversary in [uniform(1), Adversary::Hotspot] {
                        for a in AlgorithmKind::MAIN_SET {
                            cells.push((n, a, adversary, StartConfig::Shuffled));
                        }
                    }
                }
            }
            Preset::FigSwapRatio => {
                for n in sizes(vec![1000]) {
                    for a in AlgorithmKind::ALL.into_iter().filter(|a| a.is_quadratic()) {
                        for r in [1, 10, 100, 256] {
                            cells.push((n, a, uniform(r), StartConfig::Sorted));
                        }
                    }
                }
            }
            Preset::TableConv => {
                for n in sizes(vec![1000]) {
                    for r in 0..=10 {
                        for a in [Insertion, Quicksort] {
                            cells.push((n, a, uniform(r), StartConfig::Shuffled));
                        }
                    }
                }
            }
            Preset::TableRatio => {
                for n in sizes(vec![1000]) {
                    for r in Self::table_ratio_rates() {
                        for a in AlgorithmKind::MAIN_SET {
                            cells.push((n, a, uniform(r), StartConfig::Sorted));
                        }
                    }
                }
            }
        }
        let reps = opts
            .repetitions
            .unwrap_or_else(|| self.default_repetitions());
        cells
            .into_iter()
            .flat_map(|(n, algorithm, adversary, start)| {
                let mut cfg = ExperimentConfig::new(n, algorithm, adversary, start)
                    .with_seed(opts.seed)
                    .with_repetitions(reps);
                cfg.max_steps = opts.max_steps;
                cfg.expand()
            })
            .collect()
    }

    /// Layout of the summary table: header of the row column, row and
    /// column labels of a cell, and its value.
    fn table_shape(self) -> TableShape {
        fn by_algorithm(a: &AggregateRow) -> String {
            a.algorithm.to_string()
        }
        fn by_rate(a: &AggregateRow) -> String {
            a.r.to_string()
        }
        fn ratio(a: &AggregateRow) -> Option<String> {
            Some(format!("{:.2}", a.mean_ratio))
        }
        match self {
            Preset::FigAlgs => TableShape {
                row_header: "algorithm",
                row: by_algorithm,
                col: |_| "ratio".into(),
                value: ratio,
            },
            Preset::FigRvsSize => TableShape {
                row_header: "n",
                row: |a| a.n.to_string(),
                col: |a| format!("{} r={}", a.algorithm, a.r),
                value: ratio,
            },
            Preset::FigStartConfig => TableShape {
                row_header: "start",
                row: |a| a.start.to_string(),
                col: by_algorithm,
                value: ratio,
            },
            Preset::FigHot => TableShape {
                row_header: "algorithm",
                row: by_algorithm,
                col: |a| a.adversary.to_string(),
                value: ratio,
            },
            Preset::FigSwapRatio => TableShape {
                row_header: "r",
                row: by_rate,
                col: by_algorithm,
                value: |a| a.mean_good_over_bad.map(|g| format!("{g:.4}")),
            },
            Preset::TableConv => TableShape {
                row_header: "r",
                row: by_rate,
                col: by_algorithm,
                value: |a| Some(format!("{:.0}", a.mean_convergence_time)),
            },
            Preset::TableRatio => TableShape {
                row_header: "r",
                row: by_rate,
                col: by_algorithm,
                value: ratio,
            },
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase().replace('_', "-");
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == lower)
            .ok_or_else(|| Error::UnknownPreset(s.to_string()))
    }
}

struct TableShape {
    row_header: &'static str,
    row: fn(&AggregateRow) -> String,
    col: fn(&AggregateRow) -> String,
    value: fn(&AggregateRow) -> Option<String>,
}

/// Overrides applied when reproducing a preset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReproduceOptions {
    /// Master seed of the first repetition.
    pub seed: u64,
    /// Replaces the preset's default repetition count.
    pub repetitions: Option<u32>,
    /// Replaces every list size of the preset.
    pub n: Option<usize>,
    /// Replaces the default `n^2` run length.
    pub max_steps: Option<u64>,
    pub workers: usize,
}

impl Default for ReproduceOptions {
    fn default() -> Self {
        Self {
            seed: 1,
            repetitions: None,
            n: None,
            max_steps: None,
            workers: 1,
        }
    }
}

/// Files written by [`reproduce`].
#[derive(Debug)]
pub struct ReproduceReport {
    pub preset: Preset,
    pub samples: PathBuf,
    pub summary: PathBuf,
    pub aggregate: PathBuf,
    pub table: PathBuf,
    pub aggregate_rows: Vec<AggregateRow>,
    pub failures: Vec<(ExperimentConfig, String)>,
}

impl ReproduceReport {
    pub fn files(&self) -> [&Path; 4] {
        [&self.samples, &self.summary, &self.aggregate, &self.table]
    }
}

/// Runs `preset` and writes `<name>_samples.csv`, `<name>_summary.csv`,
/// `<name>_aggregate.csv` and `<name>_table.csv` under `dir`.
pub fn reproduce(preset: Preset, dir: &Path, opts: &ReproduceOptions) -> Result<ReproduceReport> {
    let configs = preset.configs(opts);
    for cfg in &configs {
        cfg.validate()?;
    }
    let stem = preset.name();
    let sweep = run_sweep_to_csv(&configs, opts.workers, dir, stem)?;
    let rows = aggregate(&sweep.rows);
    let aggregate_path = dir.join(format!("{stem}_aggregate.csv"));
    write_aggregate_csv(&aggregate_path, &rows)?;
    let table = dir.join(format!("{stem}_table.csv"));
    write_table(&table, &preset.table_shape(), &rows)?;
    Ok(ReproduceReport {
        preset,
        samples: sweep.files.samples,
        summary: sweep.files.summary,
        aggregate: aggregate_path,
        table,
        aggregate_rows: rows,
        failures: sweep.failures,
    })
}

fn write_table(path: &Path, shape: &TableShape, rows: &[AggregateRow]) -> Result<()> {
    let mut row_labels: Vec<String> = Vec::new();
    let mut col_labels: Vec<String> = Vec::new();
    for a in rows {
        for (labels, label) in [
            (&mut row_labels, (shape.row)(a)),
            (&mut col_labels, (shape.col)(a)),
        ] {
            if !labels.contains(&label) {
                labels.push(label);
            }
        }
    }
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(
        std::iter::once(shape.row_header.to_string()).chain(col_labels.iter().cloned()),
    )?;
    for row in &row_labels {
        let mut record = vec![row.clone()];
        for col in &col_labels {
            let cell = rows
                .iter()
                .find(|a| (shape.row)(a) == *row && (shape.col)(a) == *col)
                .and_then(shape.value)
                .unwrap_or_default();
            record.push(cell);
        }
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

//! Sorting under the evolving data model.
//!
//! A sorting algorithm maintains a working list while, after every
//! comparison it makes, an adversary perturbs the hidden true order. The
//! crate simulates that race step by step, tracks the Kendall tau distance
//! between the two orders exactly, and summarizes the steady behavior each
//! algorithm settles into.
//!
//! ```
//! use evolvesort_core::{run_once, Adversary, AlgorithmKind, ExperimentConfig, StartConfig};
//!
//! let cfg = ExperimentConfig::new(50, AlgorithmKind::Insertion, Adversary::Uniform { r: 1 }, StartConfig::Sorted)
//!     .with_seed(7);
//! let record = run_once(&cfg).unwrap();
//! assert_eq!(record.samples.first().unwrap().tau, 0);
//! println!("K/n = {:.2}", record.summary.ratio);
//! ```

pub mod adversaries;
pub mod algorithms;
pub mod error;
pub mod metrics;
pub mod model;
pub mod presets;
pub mod rng;
pub mod runner;
pub mod verify;

pub use adversaries::{Adversary, AdversaryKind, MutationReport};
pub use algorithms::{AlgorithmKind, Sorter};
pub use error::{Error, MetricsError, ModelError, Result};
pub use metrics::{Sample, SteadySummary};
pub use model::{Model, StartConfig, SwapEffect, TauTracker, TrueOrder, WorkingList};
pub use presets::{reproduce, Preset, ReproduceOptions};
pub use runner::{run_once, run_sweep, ExperimentConfig, RunRecord, SweepGrid};

//! Experiment orchestration: seeded runs, persistence, aggregation.
//!
//! The protocol per `(dataset, hidden width)` cell is: derive a seed,
//! draw a fresh 70:30 split and fresh weights from it, train, evaluate
//! on the held-out rows, and repeat for the configured number of
//! independent runs. Runs are independent tasks keyed by their indices,
//! so parallel execution cannot change any result.

mod table;

pub use table::{
    aggregate, build_tables, render_table, render_tables, AggregateCell, MeasureRow,
    ReportFormat, ResultsTable,
};

use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{split, Dataset};
use crate::error::{Error, Result};
use crate::metrics::{evaluate, MetricsReport};
use crate::scalar::Scalar;
use crate::training::{one_hot_examples, train, TrainConfig};

/// Full description of one experiment sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig<T> {
    /// Dataset names to run, in execution order.
    pub datasets: Vec<String>,
    /// Hidden-layer widths to sweep.
    pub hidden_sizes: Vec<usize>,
    /// Independent runs per `(dataset, width)` cell.
    pub runs: usize,
    /// Training fraction of each split.
    pub ratio: T,
    /// Epochs per run.
    pub epochs: usize,
    /// Root seed all per-run seeds are derived from.
    pub master_seed: u64,
    /// F-score weight.
    pub beta: T,
    /// Directory run results are written to.
    pub output_dir: PathBuf,
}

impl<T: Scalar> Default for ExperimentConfig<T> {
    fn default() -> Self {
        ExperimentConfig {
            datasets: Vec::new(),
            hidden_sizes: vec![60, 80, 100],
            runs: 10,
            ratio: T::from_real(0.7),
            epochs: 500,
            master_seed: 42,
            beta: T::one(),
            output_dir: PathBuf::from("results"),
        }
    }
}

impl<T: Scalar> ExperimentConfig<T> {
    /// Checks every field range.
    pub fn validate(&self) -> Result<()> {
        if self.hidden_sizes.is_empty() {
            return Err(Error::InvalidConfig("hidden_sizes must not be empty".into()));
        }
        if self.hidden_sizes.iter().any(|&h| h == 0) {
            return Err(Error::InvalidConfig("hidden sizes must be at least 1".into()));
        }
        if self.runs == 0 {
            return Err(Error::InvalidConfig("runs must be at least 1".into()));
        }
        if !(self.ratio > T::zero() && self.ratio < T::one()) {
            return Err(Error::InvalidConfig(
                "ratio must lie strictly between 0 and 1".into(),
            ));
        }
        if self.epochs == 0 {
            return Err(Error::InvalidConfig("epochs must be at least 1".into()));
        }
        if !(self.beta.is_finite() && self.beta > T::zero()) {
            return Err(Error::InvalidConfig("beta must be positive".into()));
        }
        Ok(())
    }
}

/// SplitMix64 finalizer: a fixed, well-mixed 64-bit permutation.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed for one run by a fixed mixing function:
/// FNV-1a over the dataset name, then three SplitMix64 rounds folding
/// in the master seed, the hidden width, and the run index. Stateless,
/// so a run's seed never depends on which other runs executed.
pub fn derive_run_seed(master_seed: u64, dataset_name: &str, n_hidden: usize, run_index: usize) -> u64 {
    let mut name_hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in dataset_name.as_bytes() {
        name_hash ^= u64::from(b);
        name_hash = name_hash.wrapping_mul(0x0000_0100_0000_01B3);
    }
    let mut x = splitmix64(master_seed ^ name_hash);
    x = splitmix64(x ^ n_hidden as u64);
    splitmix64(x ^ run_index as u64)
}

/// Executes one run: split, train, evaluate. The split permutation,
/// the weight init, and every epoch's shuffle all draw from the single
/// generator seeded with `run_seed`, so the report is fully
/// deterministic apart from `time_train_s`.
///
/// # Errors
///
/// Propagates validation, split, training, and evaluation errors
/// (e.g. a split too extreme to leave test rows).
pub fn run_once<T: Scalar>(
    dataset: &Dataset<T>,
    n_hidden: usize,
    run_seed: u64,
    config: &ExperimentConfig<T>,
) -> Result<MetricsReport<T>> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(run_seed);
    let pair = split(dataset, config.ratio, &mut rng)?;
    let train_config = TrainConfig {
        n_hidden,
        epochs: config.epochs,
        beta: config.beta,
        seed: run_seed,
        ..TrainConfig::default()
    };
    let outcome = train(dataset, &pair.train_indices, &train_config, &mut rng)?;
    let test = one_hot_examples(dataset, &pair.test_indices)?;
    let mse_train = *outcome
        .mse_trace
        .last()
        .expect("epochs >= 1 guarantees a trace entry");
    evaluate(&outcome.net, &test, mse_train, outcome.train_time_s, config.beta)
}

/// All runs of one `(dataset, hidden width)` cell, with the
/// originating config echoed for reproducibility.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSet<T> {
    pub dataset: String,
    pub n_hidden: usize,
    pub config: ExperimentConfig<T>,
    /// One report per run, in run-index order.
    pub reports: Vec<MetricsReport<T>>,
}

impl<T: Scalar> RunSet<T> {
    /// Canonical file name, `<dataset>_h<width>.json`.
    pub fn file_name(&self) -> String {
        format!("{}_h{}.json", self.dataset, self.n_hidden)
    }

    /// Writes the run set into `dir` (created if missing) and returns
    /// the path written.
    pub fn save(&self, dir: &Path) -> Result<PathBuf> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
        let path = dir.join(self.file_name());
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(&path, text).map_err(|e| Error::io(path.display().to_string(), e))?;
        Ok(path)
    }

    /// Reads one run-set file.
    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Reads every `*.json` in `dir`, in file-name order.
    ///
    /// # Errors
    ///
    /// Rejects unreadable directories, unparsable files, and a
    /// directory without any run-set files.
    pub fn load_dir(dir: &Path) -> Result<Vec<Self>> {
        let entries =
            std::fs::read_dir(dir).map_err(|e| Error::io(dir.display().to_string(), e))?;
        let mut paths: Vec<PathBuf> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().map(|x| x == "json").unwrap_or(false))
            .collect();
        paths.sort();
        if paths.is_empty() {
            return Err(Error::Empty("results directory"));
        }
        paths.iter().map(|p| Self::load(p)).collect()
    }
}

/// Runs the full sweep over `datasets` x `config.hidden_sizes` x
/// `config.runs`, optionally on a private thread pool of `threads`
/// workers. Results are keyed by task index, so the outcome is
/// byte-identical for every parallelism level.
///
/// # Errors
///
/// Propagates the first run error; rejects an empty dataset list.
pub fn run_experiment<T: Scalar>(
    config: &ExperimentConfig<T>,
    datasets: &[Dataset<T>],
    threads: Option<usize>,
) -> Result<Vec<RunSet<T>>> {
    config.validate()?;
    if datasets.is_empty() {
        return Err(Error::Empty("dataset list"));
    }

    let mut tasks = Vec::new();
    for (d, _) in datasets.iter().enumerate() {
        for (h, _) in config.hidden_sizes.iter().enumerate() {
            for r in 0..config.runs {
                tasks.push((d, h, r));
            }
        }
    }

    let execute = || -> Result<Vec<MetricsReport<T>>> {
        tasks
            .par_iter()
            .map(|&(d, h, r)| {
                let dataset = &datasets[d];
                let n_hidden = config.hidden_sizes[h];
                let seed = derive_run_seed(config.master_seed, dataset.name(), n_hidden, r);
                run_once(dataset, n_hidden, seed, config)
            })
            .collect()
    };
    let reports = match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?
            .install(execute),
        None => execute(),
    }?;

    // Regroup the flat, task-ordered reports into per-cell run sets.
    let mut out = Vec::with_capacity(datasets.len() * config.hidden_sizes.len());
    let mut it = reports.into_iter();
    for dataset in datasets {
        for &n_hidden in &config.hidden_sizes {
            let reports: Vec<MetricsReport<T>> = it.by_ref().take(config.runs).collect();
            out.push(RunSet {
                dataset: dataset.name().to_string(),
                n_hidden,
                config: config.clone(),
                reports,
            });
        }
    }
    Ok(out)
}

//! `skewbench` — train single-hidden-layer perceptrons on the bundled
//! benchmark datasets and report twelve evaluation measures as
//! mean±std tables.
//!
//! Subcommands:
//!
//! - `run`: execute the seeded multi-run sweep and write one JSON
//!   result file per (dataset, hidden width).
//! - `report`: aggregate stored results into text, CSV, or JSON
//!   tables.
//! - `datasets verify`: load every bundled dataset and check its
//!   (samples, features, classes) shape.
//!
//! Every `run` flag can also be given in an optional `key = value`
//! config file (`--config`); explicit flags win over file values,
//! which win over the built-in defaults.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use skewbench::data::{builtin_recipe, load_dataset, verify_datasets};
use skewbench::harness::{build_tables, render_tables, run_experiment, ReportFormat, RunSet};
use skewbench::ExperimentConfig;

#[derive(Parser)]
#[command(name = "skewbench", version, about = "Perceptron benchmark with micro/macro evaluation measures", long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the benchmark sweep and store per-run results as JSON.
    Run(RunArgs),
    /// Render stored results as aggregated mean±std tables.
    Report(ReportArgs),
    /// Dataset inspection commands.
    Datasets {
        #[command(subcommand)]
        command: DatasetsCommand,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Dataset name, comma-separated list, or `all`.
    #[arg(long)]
    dataset: Option<String>,
    /// Comma-separated hidden-layer widths to sweep.
    #[arg(long)]
    hidden: Option<String>,
    /// Independent runs per (dataset, width) cell.
    #[arg(long)]
    runs: Option<usize>,
    /// Training epochs per run.
    #[arg(long)]
    epochs: Option<usize>,
    /// Master seed; per-run seeds are derived from it.
    #[arg(long)]
    seed: Option<u64>,
    /// Training fraction of each train/test split, in (0, 1).
    #[arg(long)]
    ratio: Option<f64>,
    /// Directory holding the dataset files.
    #[arg(long)]
    data_dir: Option<PathBuf>,
    /// Directory result files are written to.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: one per CPU).
    #[arg(long)]
    threads: Option<usize>,
    /// Optional `key = value` file whose keys mirror these flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    /// Directory of stored result files, or a single result file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Output format: text, csv, or json.
    #[arg(long, default_value = "text")]
    format: String,
}

#[derive(Subcommand)]
enum DatasetsCommand {
    /// Load every bundled dataset and check (n, d, m) against the
    /// expected shapes. Exits nonzero on any mismatch.
    Verify {
        /// Directory holding the dataset files.
        #[arg(long)]
        data_dir: Option<PathBuf>,
    },
}

/// Fully resolved `run` settings after merging flags, the optional
/// config file, and defaults.
struct RunSettings {
    dataset: String,
    hidden: Vec<usize>,
    runs: usize,
    epochs: usize,
    seed: u64,
    ratio: f64,
    data_dir: PathBuf,
    out: PathBuf,
    threads: Option<usize>,
}

/// Parses a `key = value` config file. Keys mirror the `run` flag
/// names (`-` and `_` are interchangeable); `#` starts a comment.
fn parse_config_file(text: &str, path: &Path) -> Result<HashMap<String, String>> {
    let mut map = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!(
                "{}:{}: expected `key = value`, found `{line}`",
                path.display(),
                i + 1
            );
        };
        let key = key.trim().replace('_', "-");
        let value = value.trim().to_string();
        if value.is_empty() {
            bail!("{}:{}: empty value for `{key}`", path.display(), i + 1);
        }
        const KNOWN: &[&str] = &[
            "dataset", "hidden", "runs", "epochs", "seed", "ratio", "data-dir", "out", "threads",
        ];
        if !KNOWN.contains(&key.as_str()) {
            bail!("{}:{}: unknown key `{key}`", path.display(), i + 1);
        }
        if map.insert(key.clone(), value).is_some() {
            bail!("{}:{}: duplicate key `{key}`", path.display(), i + 1);
        }
    }
    Ok(map)
}

fn parse_hidden_list(s: &str) -> Result<Vec<usize>> {
    let widths: Vec<usize> = s
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .with_context(|| format!("invalid hidden width `{}`", p.trim()))
        })
        .collect::<Result<_>>()?;
    if widths.is_empty() {
        bail!("hidden width list is empty");
    }
    Ok(widths)
}

impl RunSettings {
    fn resolve(args: &RunArgs) -> Result<Self> {
        let file = match &args.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading config file {}", path.display()))?;
                parse_config_file(&text, path)?
            }
            None => HashMap::new(),
        };
        // Flag wins; else config file; else default.
        macro_rules! pick {
            ($flag:expr, $key:literal, $default:expr) => {
                match (&$flag, file.get($key)) {
                    (Some(v), _) => v.clone(),
                    (None, Some(v)) => v
                        .parse()
                        .with_context(|| format!("config key `{}`: invalid value `{v}`", $key))?,
                    (None, None) => $default,
                }
            };
        }
        let threads = match (&args.threads, file.get("threads")) {
            (Some(v), _) => Some(*v),
            (None, Some(v)) => Some(
                v.parse()
                    .with_context(|| format!("config key `threads`: invalid value `{v}`"))?,
            ),
            (None, None) => None,
        };
        Ok(RunSettings {
            dataset: pick!(args.dataset, "dataset", "all".to_string()),
            hidden: parse_hidden_list(&pick!(args.hidden, "hidden", "60,80,100".to_string()))?,
            runs: pick!(args.runs, "runs", 10),
            epochs: pick!(args.epochs, "epochs", 500),
            seed: pick!(args.seed, "seed", 42),
            ratio: pick!(args.ratio, "ratio", 0.7),
            data_dir: pick!(args.data_dir, "data-dir", PathBuf::from("data")),
            out: pick!(args.out, "out", PathBuf::from("results")),
            threads,
        })
    }

    fn dataset_names(&self) -> Result<Vec<String>> {
        if self.dataset == "all" {
            return Ok(skewbench::data::builtin_names()
                .iter()
                .map(|s| s.to_string())
                .collect());
        }
        self.dataset
            .split(',')
            .map(|p| {
                let name = p.trim();
                builtin_recipe(name)?; // rejects unknown names
                Ok(name.to_string())
            })
            .collect()
    }
}

fn cmd_run(args: &RunArgs) -> Result<ExitCode> {
    let settings = RunSettings::resolve(args)?;
    let names = settings.dataset_names()?;

    let datasets = names
        .iter()
        .map(|name| {
            let spec = builtin_recipe(name)?;
            load_dataset::<f64>(&spec, &settings.data_dir.join(&spec.file))
        })
        .collect::<skewbench::Result<Vec<_>>>()
        .context("loading datasets")?;

    let config = ExperimentConfig {
        datasets: names.clone(),
        hidden_sizes: settings.hidden.clone(),
        runs: settings.runs,
        ratio: settings.ratio,
        epochs: settings.epochs,
        master_seed: settings.seed,
        beta: 1.0,
        output_dir: settings.out.clone(),
    };

    eprintln!(
        "running {} dataset(s) x {} width(s) x {} run(s), {} epochs each",
        names.len(),
        settings.hidden.len(),
        settings.runs,
        settings.epochs
    );
    let runsets = run_experiment(&config, &datasets, settings.threads)?;
    for rs in &runsets {
        let path = rs.save(&settings.out)?;
        eprintln!("wrote {}", path.display());
    }

    let tables = build_tables(&runsets)?;
    print!("{}", render_tables(&tables, ReportFormat::Text)?);
    Ok(ExitCode::SUCCESS)
}

fn cmd_report(args: &ReportArgs) -> Result<ExitCode> {
    let format: ReportFormat = args.format.parse::<ReportFormat>()?;
    let runsets: Vec<RunSet<f64>> = if args.input.is_dir() {
        RunSet::load_dir(&args.input)?
    } else {
        vec![RunSet::load(&args.input)?]
    };
    let tables = build_tables(&runsets)?;
    print!("{}", render_tables(&tables, format)?);
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(data_dir: &Path) -> Result<ExitCode> {
    let reports = verify_datasets(data_dir);
    let mut all_ok = true;
    for r in &reports {
        let (en, ed, em) = r.expected;
        match &r.found {
            Ok((n, d, m)) if r.passed() => {
                println!("{:<14} n={n:<5} d={d:<3} m={m:<3} ok", r.name);
            }
            Ok((n, d, m)) => {
                all_ok = false;
                println!(
                    "{:<14} n={n:<5} d={d:<3} m={m:<3} MISMATCH (expected n={en} d={ed} m={em})",
                    r.name
                );
            }
            Err(e) => {
                all_ok = false;
                println!("{:<14} ERROR: {e} (expected n={en} d={ed} m={em})", r.name);
            }
        }
    }
    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Report(args) => cmd_report(args),
        Command::Datasets {
            command: DatasetsCommand::Verify { data_dir },
        } => cmd_verify(data_dir.as_deref().unwrap_or(Path::new("data"))),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

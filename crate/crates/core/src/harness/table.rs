//! Aggregation of per-run reports into mean±std tables and their
//! text/CSV/JSON rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::RunSet;
use crate::error::{Error, Result};
use crate::metrics::{Measure, MetricValue, MetricsReport};
use crate::scalar::Scalar;

/// One aggregated table cell: mean and sample standard deviation over
/// the runs, or undefined if any contributing run was undefined (a
/// mean over a mixed sample would have no honest value). Undefined
/// serializes as `"--"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AggregateCell<T> {
    Defined { mean: T, std: T },
    Undefined,
}

impl<T> AggregateCell<T> {
    pub fn is_defined(&self) -> bool {
        matches!(self, AggregateCell::Defined { .. })
    }
}

impl<T: Serialize> Serialize for AggregateCell<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        match self {
            AggregateCell::Defined { mean, std } => {
                let mut s = serializer.serialize_struct("AggregateCell", 2)?;
                s.serialize_field("mean", mean)?;
                s.serialize_field("std", std)?;
                s.end()
            }
            AggregateCell::Undefined => serializer.serialize_str("--"),
        }
    }
}

impl<'de, T: Deserialize<'de>> Deserialize<'de> for AggregateCell<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr<T> {
            Stats { mean: T, std: T },
            Text(String),
        }
        match Repr::<T>::deserialize(deserializer)? {
            Repr::Stats { mean, std } => Ok(AggregateCell::Defined { mean, std }),
            Repr::Text(s) if s == "--" => Ok(AggregateCell::Undefined),
            Repr::Text(s) => Err(D::Error::custom(format!(
                "expected {{mean, std}} or \"--\", found \"{s}\""
            ))),
        }
    }
}

/// Aggregates run reports into one cell per measure, in report row
/// order. The standard deviation uses the n-1 (sample) denominator; a
/// single run reports a deviation of zero.
///
/// # Errors
///
/// Rejects an empty report list.
pub fn aggregate<T: Scalar>(reports: &[MetricsReport<T>]) -> Result<Vec<AggregateCell<T>>> {
    if reports.is_empty() {
        return Err(Error::Empty("report list"));
    }
    let n = reports.len();
    let n_t = T::from_count(n as u64);
    Ok(Measure::ALL
        .iter()
        .map(|&measure| {
            let mut values = Vec::with_capacity(n);
            for r in reports {
                match r.value(measure) {
                    MetricValue::Defined(v) => values.push(v),
                    MetricValue::Undefined => return AggregateCell::Undefined,
                }
            }
            let mean = values.iter().copied().sum::<T>() / n_t;
            let std = if n < 2 {
                T::zero()
            } else {
                let ss = values
                    .iter()
                    .map(|&v| (v - mean) * (v - mean))
                    .sum::<T>();
                (ss / T::from_count((n - 1) as u64)).sqrt()
            };
            AggregateCell::Defined { mean, std }
        })
        .collect())
}

/// One table row: a measure and its cell per dataset column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureRow<T> {
    /// Machine-readable measure key (e.g. `precision_macro`).
    pub measure: String,
    /// One cell per entry of the table's `datasets`.
    pub cells: Vec<AggregateCell<T>>,
}

/// Aggregated results for one hidden width: measures as rows, datasets
/// as columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultsTable<T> {
    pub n_hidden: usize,
    /// Column order, alphabetical by dataset name.
    pub datasets: Vec<String>,
    /// Exactly the twelve measures, in report row order.
    pub rows: Vec<MeasureRow<T>>,
}

/// Groups run sets by hidden width and aggregates each into a table.
/// Tables come back in ascending width order with alphabetically
/// sorted dataset columns, independent of the input order.
///
/// # Errors
///
/// Rejects empty input, duplicate `(dataset, width)` cells, and empty
/// report lists.
pub fn build_tables<T: Scalar>(runsets: &[RunSet<T>]) -> Result<Vec<ResultsTable<T>>> {
    if runsets.is_empty() {
        return Err(Error::Empty("run-set list"));
    }
    let mut grouped: BTreeMap<usize, BTreeMap<&str, &RunSet<T>>> = BTreeMap::new();
    for rs in runsets {
        let prev = grouped
            .entry(rs.n_hidden)
            .or_default()
            .insert(rs.dataset.as_str(), rs);
        if prev.is_some() {
            return Err(Error::InvalidConfig(format!(
                "duplicate results for dataset `{}` at {} hidden units",
                rs.dataset, rs.n_hidden
            )));
        }
    }
    grouped
        .into_iter()
        .map(|(n_hidden, by_dataset)| {
            let datasets: Vec<String> = by_dataset.keys().map(|s| s.to_string()).collect();
            let columns: Vec<Vec<AggregateCell<T>>> = by_dataset
                .values()
                .map(|rs| aggregate(&rs.reports))
                .collect::<Result<_>>()?;
            let rows = Measure::ALL
                .iter()
                .enumerate()
                .map(|(i, m)| MeasureRow {
                    measure: m.key().to_string(),
                    cells: columns.iter().map(|col| col[i]).collect(),
                })
                .collect();
            Ok(ResultsTable {
                n_hidden,
                datasets,
                rows,
            })
        })
        .collect()
}

/// Output encodings for result tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    /// Aligned `mean±std` cells rounded to 4 decimals.
    Text,
    /// One row per (width, measure) with full-precision mean/std
    /// columns per dataset.
    Csv,
    /// Full-precision JSON array of tables; parses back losslessly.
    Json,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(ReportFormat::Text),
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::InvalidConfig(format!(
                "unknown format `{other}` (expected text, csv, or json)"
            ))),
        }
    }
}

fn measure_label(key: &str) -> &str {
    Measure::ALL
        .iter()
        .find(|m| m.key() == key)
        .map(|m| m.label())
        .unwrap_or(key)
}

fn text_cell<T: Scalar>(cell: &AggregateCell<T>) -> String {
    match cell {
        AggregateCell::Defined { mean, std } => format!("{mean:.4}±{std:.4}"),
        AggregateCell::Undefined => "--".to_string(),
    }
}

fn render_text<T: Scalar>(tables: &[ResultsTable<T>]) -> String {
    let mut out = String::new();
    for (ti, table) in tables.iter().enumerate() {
        if ti > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "n_hidden = {}", table.n_hidden);
        let cells: Vec<Vec<String>> = table
            .rows
            .iter()
            .map(|row| row.cells.iter().map(text_cell).collect())
            .collect();
        let label_width = table
            .rows
            .iter()
            .map(|r| measure_label(&r.measure).chars().count())
            .max()
            .unwrap_or(0)
            .max("Measure".len());
        let col_widths: Vec<usize> = table
            .datasets
            .iter()
            .enumerate()
            .map(|(c, name)| {
                cells
                    .iter()
                    .map(|row| row[c].chars().count())
                    .max()
                    .unwrap_or(0)
                    .max(name.chars().count())
            })
            .collect();

        let mut line = format!("{:<label_width$}", "Measure");
        for (c, name) in table.datasets.iter().enumerate() {
            let _ = write!(line, "  {:<w$}", name, w = col_widths[c]);
        }
        let _ = writeln!(out, "{}", line.trim_end());
        let total = label_width + col_widths.iter().map(|w| w + 2).sum::<usize>();
        out.push_str(&"-".repeat(total));
        out.push('\n');
        for (row, row_cells) in table.rows.iter().zip(&cells) {
            let mut line = format!("{:<label_width$}", measure_label(&row.measure));
            for (c, cell) in row_cells.iter().enumerate() {
                let _ = write!(line, "  {:<w$}", cell, w = col_widths[c]);
            }
            let _ = writeln!(out, "{}", line.trim_end());
        }
    }
    out
}

fn render_csv<T: Scalar>(tables: &[ResultsTable<T>]) -> String {
    let mut out = String::new();
    for (ti, table) in tables.iter().enumerate() {
        if ti > 0 {
            out.push('\n');
        }
        let mut header = String::from("n_hidden,measure");
        for name in &table.datasets {
            let _ = write!(header, ",{name}_mean,{name}_std");
        }
        let _ = writeln!(out, "{header}");
        for row in &table.rows {
            let mut line = format!("{},{}", table.n_hidden, row.measure);
            for cell in &row.cells {
                match cell {
                    AggregateCell::Defined { mean, std } => {
                        let _ = write!(line, ",{mean},{std}");
                    }
                    AggregateCell::Undefined => line.push_str(",--,--"),
                }
            }
            let _ = writeln!(out, "{line}");
        }
    }
    out
}

/// Renders tables in the requested format. Text rounds cells to
/// `mean±std` with 4 decimals; CSV and JSON carry full precision, and
/// the JSON form round-trips back into equal [`ResultsTable`] values.
pub fn render_tables<T: Scalar>(tables: &[ResultsTable<T>], format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Text => Ok(render_text(tables)),
        ReportFormat::Csv => Ok(render_csv(tables)),
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(tables)?;
            s.push('\n');
            Ok(s)
        }
    }
}

/// [`render_tables`] for a single table.
pub fn render_table<T: Scalar>(table: &ResultsTable<T>, format: ReportFormat) -> Result<String> {
    render_tables(std::slice::from_ref(table), format)
}

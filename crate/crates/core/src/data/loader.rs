//! Raw-file parsing: recipe application, imputation, normalization.

use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::recipe::{builtin_recipe, DatasetSpec, Delimiter, MissingPolicy};
use super::{normalize_columns, Dataset};

/// Expected `(name, n, d, m)` for the seven benchmark datasets:
/// instance count, feature count after drops, and classes present.
pub const EXPECTED_SHAPES: &[(&str, usize, usize, usize)] = &[
    ("abalone", 4177, 8, 28),
    ("breast_cancer", 699, 9, 2),
    ("ecoli", 336, 7, 8),
    ("glass", 214, 9, 6),
    ("ilpd", 583, 10, 2),
    ("iris", 150, 4, 3),
    ("wine", 178, 13, 3),
];

/// One feature column while parsing: either numeric cells (`None` for
/// missing) or raw category strings.
enum Column {
    Numeric(Vec<Option<f64>>),
    Categorical(Vec<String>),
}

/// Loads and fully prepares the dataset described by `spec` from the
/// file at `path`: parse, drop columns, code categoricals, impute
/// missing cells, then min-max normalize with full-dataset statistics.
///
/// # Errors
///
/// I/O failures, malformed rows (wrong arity, non-numeric cells), and
/// recipes inconsistent with the file's column count are rejected;
/// parse errors carry the 1-based line number.
pub fn load_dataset<T: Scalar>(spec: &DatasetSpec, path: &Path) -> Result<Dataset<T>> {
    let display = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(display.clone(), e))?;
    load_dataset_from_str(spec, &text, &display)
}

/// [`load_dataset`] over in-memory text; `origin` labels error
/// messages.
pub fn load_dataset_from_str<T: Scalar>(
    spec: &DatasetSpec,
    text: &str,
    origin: &str,
) -> Result<Dataset<T>> {
    spec.validate()?;
    let parse_err = |line: usize, msg: String| Error::Parse {
        path: origin.to_string(),
        line,
        msg,
    };

    // Collect cells per line, keeping 1-based line numbers for errors.
    let mut rows: Vec<(usize, Vec<&str>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        if raw.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = match spec.delimiter {
            Delimiter::Comma => raw.split(',').map(str::trim).collect(),
            Delimiter::Whitespace => raw.split_whitespace().collect(),
        };
        rows.push((idx + 1, cells));
    }
    if rows.is_empty() {
        return Err(Error::Empty("data file"));
    }

    let arity = rows[0].1.len();
    for (line, cells) in &rows {
        if cells.len() != arity {
            return Err(parse_err(
                *line,
                format!("expected {arity} columns, found {}", cells.len()),
            ));
        }
    }
    let recipe_err = |msg: String| Error::Recipe {
        origin: spec.name.clone(),
        msg,
    };
    for &col in std::iter::once(&spec.target_column)
        .chain(&spec.drop_columns)
        .chain(&spec.categorical_columns)
    {
        if col >= arity {
            return Err(recipe_err(format!(
                "column index {col} out of range for a {arity}-column file"
            )));
        }
    }

    // Feature columns: everything except the target and the drops, in
    // raw column order.
    let feature_cols: Vec<usize> = (0..arity)
        .filter(|c| *c != spec.target_column && !spec.drop_columns.contains(c))
        .collect();
    if feature_cols.is_empty() {
        return Err(recipe_err("no feature columns left after drops".into()));
    }
    let d = feature_cols.len();
    let n = rows.len();

    // Class labels: dense indices in order of first appearance.
    let mut class_names: Vec<String> = Vec::new();
    let mut class_index: HashMap<String, usize> = HashMap::new();
    let mut labels = Vec::with_capacity(n);
    for (_, cells) in &rows {
        let raw = cells[spec.target_column];
        let idx = *class_index.entry(raw.to_string()).or_insert_with(|| {
            class_names.push(raw.to_string());
            class_names.len() - 1
        });
        labels.push(idx);
    }

    // Parse feature columns.
    let mut columns: Vec<Column> = feature_cols
        .iter()
        .map(|c| {
            if spec.categorical_columns.contains(c) {
                Column::Categorical(Vec::with_capacity(n))
            } else {
                Column::Numeric(Vec::with_capacity(n))
            }
        })
        .collect();
    for (line, cells) in &rows {
        for (slot, &c) in feature_cols.iter().enumerate() {
            let cell = cells[c];
            let missing = spec.missing_token.as_deref() == Some(cell);
            match &mut columns[slot] {
                Column::Categorical(values) => {
                    if missing {
                        return Err(parse_err(
                            *line,
                            format!("missing value in categorical column {c} is unsupported"),
                        ));
                    }
                    values.push(cell.to_string());
                }
                Column::Numeric(values) => {
                    if missing {
                        values.push(None);
                    } else {
                        let v = cell.parse::<f64>().ok().filter(|v| v.is_finite());
                        match v {
                            Some(v) => values.push(Some(v)),
                            None => {
                                return Err(parse_err(
                                    *line,
                                    format!("column {c}: `{cell}` is not numeric"),
                                ))
                            }
                        }
                    }
                }
            }
        }
    }

    // Resolve every column to f64: code categoricals by lexicographic
    // category order; impute numeric gaps with the column mean.
    let mut matrix = vec![0.0f64; n * d];
    for (slot, column) in columns.iter().enumerate() {
        match column {
            Column::Categorical(values) => {
                let mut cats: Vec<&String> = values.iter().collect();
                cats.sort();
                cats.dedup();
                let code: HashMap<&String, usize> =
                    cats.iter().enumerate().map(|(i, c)| (*c, i)).collect();
                for (r, v) in values.iter().enumerate() {
                    matrix[r * d + slot] = code[v] as f64;
                }
            }
            Column::Numeric(values) => {
                let present: Vec<f64> = values.iter().flatten().copied().collect();
                if present.is_empty() {
                    return Err(recipe_err(format!(
                        "feature column {} has no non-missing values",
                        feature_cols[slot]
                    )));
                }
                let MissingPolicy::ImputeColumnMean = spec.missing_policy;
                let mean = present.iter().sum::<f64>() / present.len() as f64;
                for (r, v) in values.iter().enumerate() {
                    matrix[r * d + slot] = v.unwrap_or(mean);
                }
            }
        }
    }

    normalize_columns(&mut matrix, d)?;
    let features: Vec<T> = matrix.into_iter().map(T::from_real).collect();
    Dataset::new(spec.name.clone(), features, d, labels, class_names)
}

/// Outcome of checking one benchmark dataset against its expected
/// shape.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub name: String,
    /// Expected `(n, d, m)`.
    pub expected: (usize, usize, usize),
    /// Loaded `(n, d, m)`, or the load error rendered as text.
    pub found: std::result::Result<(usize, usize, usize), String>,
}

impl VerifyReport {
    /// True when the dataset loaded and matched the expected shape.
    pub fn passed(&self) -> bool {
        self.found.as_ref().map(|f| *f == self.expected).unwrap_or(false)
    }
}

/// Loads every benchmark dataset from `data_dir` and compares `(n, d,
/// m)` against [`EXPECTED_SHAPES`]. Load failures are captured in the
/// reports rather than returned.
pub fn verify_datasets(data_dir: &Path) -> Vec<VerifyReport> {
    EXPECTED_SHAPES
        .iter()
        .map(|&(name, n, d, m)| {
            let found = builtin_recipe(name)
                .and_then(|spec| load_dataset::<f64>(&spec, &data_dir.join(&spec.file)))
                .map(|ds| (ds.len(), ds.n_features(), ds.n_classes()))
                .map_err(|e| e.to_string());
            VerifyReport {
                name: name.to_string(),
                expected: (n, d, m),
                found,
            }
        })
        .collect()
}

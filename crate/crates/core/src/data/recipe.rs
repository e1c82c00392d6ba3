//! Ingestion recipes: how to turn one raw data file into a dataset.
//!
//! A recipe is a plain-text file of `key = value` lines (with `#`
//! comments) naming the data file, its delimiter, which columns to
//! drop, which column is the class label, which feature columns are
//! categorical, and how missing values are marked and handled. The
//! seven benchmark recipes are compiled into the library and also
//! shipped as files under `recipes/`.

use crate::error::{Error, Result};

/// Cell separator of the raw file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Delimiter {
    /// Comma-separated; surrounding whitespace per cell is trimmed.
    Comma,
    /// Any run of whitespace separates cells.
    Whitespace,
}

/// Treatment of cells equal to the missing-value token.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MissingPolicy {
    /// Replace with the pre-normalization mean of the column's
    /// non-missing entries.
    ImputeColumnMean,
}

/// Parsed ingestion recipe for one dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSpec {
    /// Dataset identifier (also the default report column header).
    pub name: String,
    /// File name to load from the data directory.
    pub file: String,
    pub delimiter: Delimiter,
    /// Zero-based raw column indices to discard (IDs, sequence names).
    pub drop_columns: Vec<usize>,
    /// Zero-based raw column index holding the class label.
    pub target_column: usize,
    /// Feature columns to integer-code by lexicographic category
    /// order before normalization.
    pub categorical_columns: Vec<usize>,
    /// Literal string marking a missing cell, if the file has any.
    pub missing_token: Option<String>,
    pub missing_policy: MissingPolicy,
}

impl DatasetSpec {
    /// Checks internal consistency of the recipe.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| {
            Err(Error::Recipe {
                origin: self.name.clone(),
                msg,
            })
        };
        if self.name.is_empty() {
            return fail("name must not be empty".into());
        }
        if self.file.is_empty() {
            return fail("file must not be empty".into());
        }
        if self.drop_columns.contains(&self.target_column) {
            return fail(format!(
                "target column {} is also listed in drop_columns",
                self.target_column
            ));
        }
        if self.categorical_columns.contains(&self.target_column) {
            return fail(format!(
                "target column {} is also listed in categorical_columns",
                self.target_column
            ));
        }
        Ok(())
    }
}

fn parse_index_list(value: &str, origin: &str, key: &str) -> Result<Vec<usize>> {
    let mut out: Vec<usize> = value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>().map_err(|_| Error::Recipe {
                origin: origin.to_string(),
                msg: format!("{key}: `{s}` is not a column index"),
            })
        })
        .collect::<Result<_>>()?;
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Parses recipe text (`key = value` lines, `#` comments). `origin` is
/// used in error messages, typically the file name.
///
/// Required keys: `name`, `file`, `target_column`. Optional:
/// `delimiter` (`comma`, the default, or `whitespace`), `drop_columns`
/// and `categorical_columns` (comma-separated indices),
/// `missing_token`, `missing_policy` (`impute-column-mean`).
pub fn parse_recipe(text: &str, origin: &str) -> Result<DatasetSpec> {
    let fail = |msg: String| Error::Recipe {
        origin: origin.to_string(),
        msg,
    };

    let mut name = None;
    let mut file = None;
    let mut delimiter = Delimiter::Comma;
    let mut drop_columns = Vec::new();
    let mut target_column = None;
    let mut categorical_columns = Vec::new();
    let mut missing_token = None;
    let missing_policy = MissingPolicy::ImputeColumnMean;

    for (line_no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| fail(format!("line {}: expected `key = value`", line_no + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "name" => name = Some(value.to_string()),
            "file" => file = Some(value.to_string()),
            "delimiter" => {
                delimiter = match value {
                    "comma" => Delimiter::Comma,
                    "whitespace" => Delimiter::Whitespace,
                    other => return Err(fail(format!("unknown delimiter `{other}`"))),
                }
            }
            "drop_columns" => drop_columns = parse_index_list(value, origin, key)?,
            "target_column" => {
                target_column = Some(value.parse::<usize>().map_err(|_| {
                    fail(format!("target_column: `{value}` is not a column index"))
                })?)
            }
            "categorical_columns" => categorical_columns = parse_index_list(value, origin, key)?,
            "missing_token" => missing_token = Some(value.to_string()),
            "missing_policy" => {
                if value != "impute-column-mean" {
                    return Err(fail(format!("unknown missing_policy `{value}`")));
                }
            }
            other => return Err(fail(format!("unknown key `{other}`"))),
        }
    }

    let spec = DatasetSpec {
        name: name.ok_or_else(|| fail("missing required key `name`".into()))?,
        file: file.ok_or_else(|| fail("missing required key `file`".into()))?,
        delimiter,
        drop_columns,
        target_column: target_column
            .ok_or_else(|| fail("missing required key `target_column`".into()))?,
        categorical_columns,
        missing_token,
        missing_policy,
    };
    spec.validate()?;
    Ok(spec)
}

/// The seven benchmark recipes, compiled in from `recipes/`.
const BUILTIN: &[(&str, &str)] = &[
    ("abalone", include_str!("../../recipes/abalone.recipe")),
    ("breast_cancer", include_str!("../../recipes/breast_cancer.recipe")),
    ("ecoli", include_str!("../../recipes/ecoli.recipe")),
    ("glass", include_str!("../../recipes/glass.recipe")),
    ("ilpd", include_str!("../../recipes/ilpd.recipe")),
    ("iris", include_str!("../../recipes/iris.recipe")),
    ("wine", include_str!("../../recipes/wine.recipe")),
];

/// Names of the built-in datasets, alphabetically.
pub fn builtin_names() -> Vec<&'static str> {
    BUILTIN.iter().map(|(n, _)| *n).collect()
}

/// Returns the built-in recipe with the given name.
///
/// # Errors
///
/// Unknown names are rejected.
pub fn builtin_recipe(name: &str) -> Result<DatasetSpec> {
    let (_, text) = BUILTIN
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::UnknownDataset(name.to_string()))?;
    parse_recipe(text, name)
}

/// All built-in recipes, in alphabetical dataset order.
pub fn builtin_recipes() -> Result<Vec<DatasetSpec>> {
    BUILTIN.iter().map(|(n, _)| builtin_recipe(n)).collect()
}

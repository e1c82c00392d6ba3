//! Dataset ingestion: recipes, loading, normalization, splitting.
//!
//! Raw UCI-format text files are turned into [`Dataset`] values by
//! per-dataset recipes (column drops, categorical coding, missing-value
//! imputation), normalized to [0, 1] with full-dataset min/max, and
//! later split 70:30 by a seeded shuffle. Normalization statistics are
//! deliberately computed before splitting.

mod loader;
mod recipe;

pub use loader::{load_dataset, load_dataset_from_str, verify_datasets, VerifyReport, EXPECTED_SHAPES};
pub use recipe::{builtin_names, builtin_recipe, builtin_recipes, parse_recipe, DatasetSpec, Delimiter, MissingPolicy};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A normalized classification dataset: an `n x d` feature matrix with
/// every value in [0, 1], one dense class label per row, and the
/// original class names.
///
/// Label indices are assigned in order of first appearance in the
/// source file, and every index below `n_classes` occurs at least once.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<T> {
    name: String,
    /// Row-major `n x d`.
    features: Vec<T>,
    n_features: usize,
    labels: Vec<usize>,
    class_names: Vec<String>,
}

impl<T: Scalar> Dataset<T> {
    /// Builds a dataset and checks every invariant: matrix shape,
    /// feature range, label range, and that every class index occurs.
    pub fn new(
        name: String,
        features: Vec<T>,
        n_features: usize,
        labels: Vec<usize>,
        class_names: Vec<String>,
    ) -> Result<Self> {
        if n_features == 0 {
            return Err(Error::InvalidConfig("need at least one feature column".into()));
        }
        if features.len() % n_features != 0 {
            return Err(Error::DimensionMismatch {
                expected: labels.len() * n_features,
                got: features.len(),
            });
        }
        let n = features.len() / n_features;
        if n == 0 {
            return Err(Error::Empty("dataset"));
        }
        if labels.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: labels.len(),
            });
        }
        let m = class_names.len();
        if m == 0 {
            return Err(Error::Empty("class-name table"));
        }
        for &v in &labels {
            if v >= m {
                return Err(Error::InvalidConfig(format!(
                    "label index {v} out of range for {m} classes"
                )));
            }
        }
        let mut seen = vec![false; m];
        for &v in &labels {
            seen[v] = true;
        }
        if !seen.iter().all(|&s| s) {
            return Err(Error::InvalidConfig(
                "every class index must occur at least once".into(),
            ));
        }
        for &v in &features {
            if !(v >= T::zero() && v <= T::one()) {
                return Err(Error::NonFinite(format!(
                    "dataset {name}: feature value {v} outside [0, 1]"
                )));
            }
        }
        Ok(Dataset {
            name,
            features,
            n_features,
            labels,
            class_names,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of instances `n`.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Number of feature columns `d`.
    pub fn n_features(&self) -> usize {
        self.n_features
    }

    /// Number of classes `m` present in the data.
    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    /// Feature vector of row `i`.
    pub fn row(&self, i: usize) -> &[T] {
        &self.features[i * self.n_features..(i + 1) * self.n_features]
    }

    /// Class index of row `i`.
    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Original class name for each dense index.
    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    /// The full row-major feature matrix.
    pub fn features(&self) -> &[T] {
        &self.features
    }
}

/// Disjoint train/test row indices covering `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitPair {
    /// `floor(ratio * n)` indices.
    pub train_indices: Vec<usize>,
    /// The remaining indices.
    pub test_indices: Vec<usize>,
}

/// Splits a dataset by drawing one uniformly random permutation from
/// `rng` and cutting it at `floor(ratio * n)`.
///
/// # Errors
///
/// Rejects `ratio` outside (0, 1) and datasets with fewer than two
/// rows.
pub fn split<T: Scalar, R: Rng + ?Sized>(
    dataset: &Dataset<T>,
    ratio: T,
    rng: &mut R,
) -> Result<SplitPair> {
    if !(ratio > T::zero() && ratio < T::one()) {
        return Err(Error::InvalidConfig(format!(
            "split ratio {ratio} must lie strictly between 0 and 1"
        )));
    }
    let n = dataset.len();
    if n < 2 {
        return Err(Error::InvalidConfig(
            "need at least 2 instances to split".into(),
        ));
    }
    let mut indices: Vec<usize> = (0..n).collect();
    indices.shuffle(rng);
    let n_train = (ratio.as_f64() * n as f64).floor() as usize;
    let test_indices = indices.split_off(n_train);
    Ok(SplitPair {
        train_indices: indices,
        test_indices,
    })
}

/// Min-max normalizes each column of a row-major matrix in place so
/// column minima map to 0 and maxima to 1. Constant columns map to 0.5
/// everywhere, keeping values inside [0, 1] without saturating
/// downstream sigmoids.
///
/// # Errors
///
/// Rejects non-finite entries and matrices whose length is not a
/// multiple of `n_cols`.
pub fn normalize_columns<T: Scalar>(data: &mut [T], n_cols: usize) -> Result<()> {
    if n_cols == 0 || data.len() % n_cols != 0 {
        return Err(Error::InvalidConfig(format!(
            "matrix of {} values is not divisible into {} columns",
            data.len(),
            n_cols
        )));
    }
    if let Some(bad) = data.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("feature matrix (value {bad})")));
    }
    let n_rows = data.len() / n_cols;
    let half = T::from_real(0.5);
    for j in 0..n_cols {
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for r in 0..n_rows {
            let v = data[r * n_cols + j];
            if v < lo {
                lo = v;
            }
            if v > hi {
                hi = v;
            }
        }
        let range = hi - lo;
        for r in 0..n_rows {
            let cell = &mut data[r * n_cols + j];
            *cell = if range > T::zero() {
                (*cell - lo) / range
            } else {
                half
            };
        }
    }
    Ok(())
}

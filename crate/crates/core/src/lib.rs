//! Skew-aware evaluation harness for single-hidden-layer perceptron
//! classifiers.
//!
//! The crate trains a sigmoid multilayer perceptron with one hidden
//! layer by per-sample stochastic gradient descent with momentum, and
//! scores it on multiclass datasets with twelve measures: training and
//! test mean squared error, wall-clock training time, overall accuracy,
//! and micro/macro averaged precision, specificity, sensitivity, and
//! F-score. Reporting both averaging flavors side by side is the point:
//! on class-skewed data, micro averages (and plain accuracy) are
//! dominated by the majority classes, while macro averages expose the
//! classes the model never predicts — often as an undefined value
//! rather than a flattering number.
//!
//! Layout:
//!
//! - [`network`]: the perceptron itself — weights, forward pass,
//!   prediction.
//! - [`training`]: backpropagation with momentum and the online
//!   training loop.
//! - [`metrics`]: confusion matrix, per-class counts, the twelve
//!   measures, and explicit undefined-value semantics.
//! - [`data`]: delimited-text dataset loading, min-max normalization,
//!   and train/test splitting.
//! - [`harness`]: seeded multi-run experiments, persistence, and
//!   mean±std results tables.
//!
//! All numeric code is generic over the [`Scalar`] precision; the
//! aliases below fix it to `f64` (the default used by the CLI) or
//! `f32`.

pub mod data;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod network;
pub mod scalar;
pub mod training;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// `f64`-precision aliases for the main crate types.
pub type Dataset = data::Dataset<f64>;
pub type MlpNetwork = network::MlpNetwork<f64>;
pub type Activation = network::Activation<f64>;
pub type TrainConfig = training::TrainConfig<f64>;
pub type TrainOutcome = training::TrainOutcome<f64>;
pub type TrainingExample = training::TrainingExample<f64>;
pub type MetricsReport = metrics::MetricsReport<f64>;
pub type MetricValue = metrics::MetricValue<f64>;
pub type BinaryMetrics = metrics::BinaryMetrics<f64>;
pub type ExperimentConfig = harness::ExperimentConfig<f64>;
pub type RunSet = harness::RunSet<f64>;
pub type ResultsTable = harness::ResultsTable<f64>;
pub type AggregateCell = harness::AggregateCell<f64>;

/// `f32`-precision aliases for the main crate types.
pub mod f32 {
    pub type Dataset = crate::data::Dataset<f32>;
    pub type MlpNetwork = crate::network::MlpNetwork<f32>;
    pub type Activation = crate::network::Activation<f32>;
    pub type TrainConfig = crate::training::TrainConfig<f32>;
    pub type TrainOutcome = crate::training::TrainOutcome<f32>;
    pub type TrainingExample = crate::training::TrainingExample<f32>;
    pub type MetricsReport = crate::metrics::MetricsReport<f32>;
    pub type MetricValue = crate::metrics::MetricValue<f32>;
    pub type BinaryMetrics = crate::metrics::BinaryMetrics<f32>;
    pub type ExperimentConfig = crate::harness::ExperimentConfig<f32>;
    pub type RunSet = crate::harness::RunSet<f32>;
    pub type ResultsTable = crate::harness::ResultsTable<f32>;
    pub type AggregateCell = crate::harness::AggregateCell<f32>;
}

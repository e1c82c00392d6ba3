//! Confusion-matrix construction and the twelve evaluation measures,
//! with explicit undefined-value semantics.
//!
//! Every measure is computed from integer counts with the division
//! performed last, so results are bit-reproducible and match a direct
//! recomputation from the raw label pairs. A ratio whose denominator
//! is zero is [`MetricValue::Undefined`] and renders as `--`.
//!
//! Micro averages pool the per-class counts before dividing and so
//! favor populous classes; macro averages divide per class and then
//! average, treating all classes equally. Macro averages skip classes
//! absent from the test truth entirely, but become undefined when a
//! class that is present is never predicted — that asymmetry is what
//! produces `--` cells for heavily skewed datasets while their
//! sensitivity stays defined.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::network::{Activation, MlpNetwork};
use crate::scalar::Scalar;
use crate::training::{mse, TrainingExample};

/// An `m x m` count matrix; rows are the true class, columns the
/// predicted class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    counts: Vec<u64>,
    m: usize,
}

impl ConfusionMatrix {
    /// Creates an all-zero `m x m` matrix.
    pub fn zeros(m: usize) -> Self {
        ConfusionMatrix {
            counts: vec![0; m * m],
            m,
        }
    }

    /// Builds a matrix from explicit row-major counts.
    ///
    /// # Errors
    ///
    /// Rejects a count vector that is not `m x m`.
    pub fn from_counts(counts: Vec<u64>, m: usize) -> Result<Self> {
        if counts.len() != m * m {
            return Err(Error::DimensionMismatch {
                expected: m * m,
                got: counts.len(),
            });
        }
        Ok(ConfusionMatrix { counts, m })
    }

    /// Number of classes.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Count of instances with true class `t` predicted as `p`.
    pub fn count(&self, t: usize, p: usize) -> u64 {
        self.counts[t * self.m + p]
    }

    /// Total number of counted instances.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Tallies predictions against ground truth.
///
/// # Errors
///
/// Rejects mismatched lengths and out-of-range labels.
pub fn confusion_from_predictions(truth: &[usize], pred: &[usize], m: usize) -> Result<ConfusionMatrix> {
    if truth.len() != pred.len() {
        return Err(Error::DimensionMismatch {
            expected: truth.len(),
            got: pred.len(),
        });
    }
    let mut cm = ConfusionMatrix::zeros(m);
    for (&t, &p) in truth.iter().zip(pred) {
        if t >= m || p >= m {
            return Err(Error::InvalidConfig(format!(
                "label pair ({t}, {p}) out of range for {m} classes"
            )));
        }
        cm.counts[t * m + p] += 1;
    }
    Ok(cm)
}

/// One-vs-rest counts for a single class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ClassCounts {
    pub true_pos: u64,
    pub false_pos: u64,
    pub false_neg: u64,
    pub true_neg: u64,
}

impl ClassCounts {
    /// Total instances; identical for every class of one matrix.
    pub fn total(&self) -> u64 {
        self.true_pos + self.false_pos + self.false_neg + self.true_neg
    }
}

/// One-vs-rest counts for every class of a confusion matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerClassCounts {
    counts: Vec<ClassCounts>,
}

impl PerClassCounts {
    pub fn m(&self) -> usize {
        self.counts.len()
    }

    pub fn class(&self, i: usize) -> ClassCounts {
        self.counts[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &ClassCounts> {
        self.counts.iter()
    }

    /// Element-wise sum over classes — the pooled counts micro
    /// averages divide.
    pub fn pooled(&self) -> ClassCounts {
        let mut acc = ClassCounts::default();
        for c in &self.counts {
            acc.true_pos += c.true_pos;
            acc.false_pos += c.false_pos;
            acc.false_neg += c.false_neg;
            acc.true_neg += c.true_neg;
        }
        acc
    }
}

/// Derives per-class tp/fp/fn/tn from a confusion matrix: `tp_i` is
/// the diagonal cell, `fn_i` the rest of row `i`, `fp_i` the rest of
/// column `i`, and `tn_i` everything else.
pub fn per_class_counts(cm: &ConfusionMatrix) -> PerClassCounts {
    let n = cm.total();
    let counts = (0..cm.m)
        .map(|i| {
            let tp = cm.count(i, i);
            let row: u64 = (0..cm.m).map(|p| cm.count(i, p)).sum();
            let col: u64 = (0..cm.m).map(|t| cm.count(t, i)).sum();
            ClassCounts {
                true_pos: tp,
                false_pos: col - tp,
                false_neg: row - tp,
                true_neg: n - row - (col - tp),
            }
        })
        .collect();
    PerClassCounts { counts }
}

/// A measure value: a real in [0, 1] (or a nonnegative error/time), or
/// undefined because a defining denominator was zero. Undefined
/// serializes as the string `"--"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetricValue<T> {
    Defined(T),
    Undefined,
}

impl<T: Scalar> MetricValue<T> {
    /// `num / den` with integer inputs, or `Undefined` when `den` is
    /// zero. The single final division keeps results exactly
    /// reproducible from the counts.
    pub fn ratio(num: u64, den: u64) -> Self {
        if den == 0 {
            MetricValue::Undefined
        } else {
            MetricValue::Defined(T::from_count(num) / T::from_count(den))
        }
    }

    pub fn is_defined(&self) -> bool {
        matches!(self, MetricValue::Defined(_))
    }

    pub fn as_defined(&self) -> Option<T> {
        match self {
            MetricValue::Defined(v) => Some(*v),
            MetricValue::Undefined => None,
        }
    }
}

impl<T: std::fmt::Display> std::fmt::Display for MetricValue<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MetricValue::Defined(v) => v.fmt(f),
            MetricValue::Undefined => f.write_str("--"),
        }
    }
}

impl<T: Serialize> Serialize for MetricValue<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            MetricValue::Defined(v) => v.serialize(serializer),
            MetricValue::Undefined => serializer.serialize_str("--"),
        }
    }
}

impl<'de, T: Deserialize<'de>> Deserialize<'de> for MetricValue<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr<T> {
            Num(T),
            Text(String),
        }
        match Repr::<T>::deserialize(deserializer)? {
            Repr::Num(v) => Ok(MetricValue::Defined(v)),
            Repr::Text(s) if s == "--" => Ok(MetricValue::Undefined),
            Repr::Text(s) => Err(D::Error::custom(format!(
                "expected a number or \"--\", found \"{s}\""
            ))),
        }
    }
}

/// The three one-vs-rest ratios that exist in micro and macro form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AverageKind {
    /// tp / (tp + fp)
    Precision,
    /// tn / (fp + tn)
    Specificity,
    /// tp / (tp + fn)
    Sensitivity,
}

impl AverageKind {
    fn numerator(self, c: ClassCounts) -> u64 {
        match self {
            AverageKind::Precision | AverageKind::Sensitivity => c.true_pos,
            AverageKind::Specificity => c.true_neg,
        }
    }

    fn denominator(self, c: ClassCounts) -> u64 {
        match self {
            AverageKind::Precision => c.true_pos + c.false_pos,
            AverageKind::Specificity => c.false_pos + c.true_neg,
            AverageKind::Sensitivity => c.true_pos + c.false_neg,
        }
    }
}

/// The five binary measures computed from one tp/fp/fn/tn quadruple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryMetrics<T> {
    pub accuracy: MetricValue<T>,
    pub sensitivity: MetricValue<T>,
    pub specificity: MetricValue<T>,
    pub precision: MetricValue<T>,
    pub fscore: MetricValue<T>,
}

/// Computes the binary measures. The F-score comes straight from the
/// counts: `(β²+1)·tp / ((β²+1)·tp + β²·fn + fp)`.
///
/// # Errors
///
/// Rejects all-zero counts and non-positive `beta`.
pub fn binary_metrics<T: Scalar>(
    tp: u64,
    fp: u64,
    fn_: u64,
    tn: u64,
    beta: T,
) -> Result<BinaryMetrics<T>> {
    let total = tp + fp + fn_ + tn;
    if total == 0 {
        return Err(Error::InvalidConfig(
            "all four confusion counts are zero".into(),
        ));
    }
    if !(beta.is_finite() && beta > T::zero()) {
        return Err(Error::InvalidConfig("beta must be positive".into()));
    }
    let b2 = beta * beta;
    let f_num = (b2 + T::one()) * T::from_count(tp);
    let f_den = f_num + b2 * T::from_count(fn_) + T::from_count(fp);
    let fscore = if f_den > T::zero() {
        MetricValue::Defined(f_num / f_den)
    } else {
        MetricValue::Undefined
    };
    Ok(BinaryMetrics {
        accuracy: MetricValue::ratio(tp + tn, total),
        sensitivity: MetricValue::ratio(tp, tp + fn_),
        specificity: MetricValue::ratio(tn, fp + tn),
        precision: MetricValue::ratio(tp, tp + fp),
        fscore,
    })
}

/// Mean over all `m` classes of `(tp_i + tn_i) / n` — the average
/// per-class accuracy. Every misclassification touches only two
/// classes' cells, so for fixed error count this grows with `m`; that
/// is exactly why it flatters skewed many-class problems.
pub fn average_accuracy<T: Scalar>(pcc: &PerClassCounts) -> MetricValue<T> {
    let m = pcc.m();
    if m == 0 {
        return MetricValue::Undefined;
    }
    let n = pcc.class(0).total();
    if n == 0 {
        return MetricValue::Undefined;
    }
    let mut acc = T::zero();
    for c in pcc.iter() {
        acc += T::from_count(c.true_pos + c.true_neg) / T::from_count(n);
    }
    MetricValue::Defined(acc / T::from_count(m as u64))
}

/// Micro average: pool the counts over classes, then divide once.
pub fn micro_average<T: Scalar>(pcc: &PerClassCounts, kind: AverageKind) -> MetricValue<T> {
    let pooled = pcc.pooled();
    MetricValue::ratio(kind.numerator(pooled), kind.denominator(pooled))
}

/// Classes that occur in the test truth (`tp + fn > 0`); only these
/// participate in macro averages.
pub fn evaluable_classes(pcc: &PerClassCounts) -> Vec<usize> {
    (0..pcc.m())
        .filter(|&i| {
            let c = pcc.class(i);
            c.true_pos + c.false_neg > 0
        })
        .collect()
}

/// Macro average: one ratio per evaluable class, then the mean. If any
/// evaluable class has a zero denominator for `kind` (a present class
/// that is never predicted, for precision), the whole average is
/// undefined.
///
/// # Errors
///
/// Rejects an empty evaluable set.
pub fn macro_average<T: Scalar>(
    pcc: &PerClassCounts,
    kind: AverageKind,
    evaluable: &[usize],
) -> Result<MetricValue<T>> {
    if evaluable.is_empty() {
        return Err(Error::Empty("evaluable class set"));
    }
    let mut acc = T::zero();
    for &i in evaluable {
        let c = pcc.class(i);
        let den = kind.denominator(c);
        if den == 0 {
            return Ok(MetricValue::Undefined);
        }
        acc += T::from_count(kind.numerator(c)) / T::from_count(den);
    }
    Ok(MetricValue::Defined(acc / T::from_count(evaluable.len() as u64)))
}

/// Combines a precision and a recall into the weighted F-score
/// `(β²+1)·P·R / (β²·P + R)`.
///
/// When `P == R` the quotient reduces algebraically to exactly `P`, so
/// that case is returned directly instead of through the floating
/// division (which can be off by one ulp); this keeps the micro
/// F-score bit-identical to the micro precision, and also covers
/// `P = R = 0`. Undefined inputs propagate.
pub fn f_score<T: Scalar>(precision: MetricValue<T>, recall: MetricValue<T>, beta: T) -> MetricValue<T> {
    debug_assert!(beta > T::zero());
    match (precision, recall) {
        (MetricValue::Defined(p), MetricValue::Defined(r)) => {
            if p == r {
                MetricValue::Defined(p)
            } else {
                let b2 = beta * beta;
                MetricValue::Defined((b2 + T::one()) * p * r / (b2 * p + r))
            }
        }
        _ => MetricValue::Undefined,
    }
}

/// The twelve report measures, in fixed row order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    MseTrain,
    TimeTrainS,
    MseTest,
    Accuracy,
    PrecisionMicro,
    PrecisionMacro,
    SpecificityMicro,
    SpecificityMacro,
    SensitivityMicro,
    SensitivityMacro,
    FscoreMicro,
    FscoreMacro,
}

impl Measure {
    /// All measures in report row order.
    pub const ALL: [Measure; 12] = [
        Measure::MseTrain,
        Measure::TimeTrainS,
        Measure::MseTest,
        Measure::Accuracy,
        Measure::PrecisionMicro,
        Measure::PrecisionMacro,
        Measure::SpecificityMicro,
        Measure::SpecificityMacro,
        Measure::SensitivityMicro,
        Measure::SensitivityMacro,
        Measure::FscoreMicro,
        Measure::FscoreMacro,
    ];

    /// Stable machine-readable key (also the JSON field name).
    pub fn key(self) -> &'static str {
        match self {
            Measure::MseTrain => "mse_train",
            Measure::TimeTrainS => "time_train_s",
            Measure::MseTest => "mse_test",
            Measure::Accuracy => "accuracy",
            Measure::PrecisionMicro => "precision_micro",
            Measure::PrecisionMacro => "precision_macro",
            Measure::SpecificityMicro => "specificity_micro",
            Measure::SpecificityMacro => "specificity_macro",
            Measure::SensitivityMicro => "sensitivity_micro",
            Measure::SensitivityMacro => "sensitivity_macro",
            Measure::FscoreMicro => "fscore_micro",
            Measure::FscoreMacro => "fscore_macro",
        }
    }

    /// Human-readable row label for text tables (μ = micro, M =
    /// macro).
    pub fn label(self) -> &'static str {
        match self {
            Measure::MseTrain => "MSE_train",
            Measure::TimeTrainS => "Time_train_s",
            Measure::MseTest => "MSE_test",
            Measure::Accuracy => "Accuracy",
            Measure::PrecisionMicro => "Precision_μ",
            Measure::PrecisionMacro => "Precision_M",
            Measure::SpecificityMicro => "Specificity_μ",
            Measure::SpecificityMacro => "Specificity_M",
            Measure::SensitivityMicro => "Sensitivity_μ",
            Measure::SensitivityMacro => "Sensitivity_M",
            Measure::FscoreMicro => "F-score_μ",
            Measure::FscoreMacro => "F-score_M",
        }
    }
}

/// All measures for one evaluated run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport<T> {
    pub mse_train: T,
    /// Wall-clock training seconds; the only machine-bound field.
    pub time_train_s: T,
    pub mse_test: T,
    pub accuracy: MetricValue<T>,
    pub precision_micro: MetricValue<T>,
    pub precision_macro: MetricValue<T>,
    pub specificity_micro: MetricValue<T>,
    pub specificity_macro: MetricValue<T>,
    pub sensitivity_micro: MetricValue<T>,
    pub sensitivity_macro: MetricValue<T>,
    pub fscore_micro: MetricValue<T>,
    pub fscore_macro: MetricValue<T>,
}

impl<T: Scalar> MetricsReport<T> {
    /// Uniform access by measure; the three always-defined scalars
    /// come back wrapped in `Defined`.
    pub fn value(&self, measure: Measure) -> MetricValue<T> {
        match measure {
            Measure::MseTrain => MetricValue::Defined(self.mse_train),
            Measure::TimeTrainS => MetricValue::Defined(self.time_train_s),
            Measure::MseTest => MetricValue::Defined(self.mse_test),
            Measure::Accuracy => self.accuracy,
            Measure::PrecisionMicro => self.precision_micro,
            Measure::PrecisionMacro => self.precision_macro,
            Measure::SpecificityMicro => self.specificity_micro,
            Measure::SpecificityMacro => self.specificity_macro,
            Measure::SensitivityMicro => self.sensitivity_micro,
            Measure::SensitivityMacro => self.sensitivity_macro,
            Measure::FscoreMicro => self.fscore_micro,
            Measure::FscoreMacro => self.fscore_macro,
        }
    }
}

/// Runs the network over the test set and assembles the full report:
/// confusion matrix, average accuracy, micro/macro averages, F-scores,
/// and the test-set MSE. `mse_train` and `time_train_s` are carried
/// through from training.
///
/// # Errors
///
/// Rejects an empty test set and arity mismatches.
pub fn evaluate<T: Scalar>(
    net: &MlpNetwork<T>,
    test: &[TrainingExample<T>],
    mse_train: T,
    time_train_s: T,
    beta: T,
) -> Result<MetricsReport<T>> {
    if test.is_empty() {
        return Err(Error::Empty("test set"));
    }
    let m = net.n_out();
    let mut act = Activation::zeros(net.n_hidden(), net.n_out());
    let mut truth = Vec::with_capacity(test.len());
    let mut pred = Vec::with_capacity(test.len());
    for ex in test {
        if ex.t.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: ex.t.len(),
            });
        }
        truth.push(ex.label());
        pred.push(net.predict_with(&ex.x, &mut act)?);
    }
    let cm = confusion_from_predictions(&truth, &pred, m)?;
    let pcc = per_class_counts(&cm);
    let evaluable = evaluable_classes(&pcc);

    let precision_micro = micro_average(&pcc, AverageKind::Precision);
    let precision_macro = macro_average(&pcc, AverageKind::Precision, &evaluable)?;
    let sensitivity_micro = micro_average(&pcc, AverageKind::Sensitivity);
    let sensitivity_macro = macro_average(&pcc, AverageKind::Sensitivity, &evaluable)?;

    Ok(MetricsReport {
        mse_train,
        time_train_s,
        mse_test: mse(net, test)?,
        accuracy: average_accuracy(&pcc),
        precision_micro,
        precision_macro,
        specificity_micro: micro_average(&pcc, AverageKind::Specificity),
        specificity_macro: macro_average(&pcc, AverageKind::Specificity, &evaluable)?,
        sensitivity_micro,
        sensitivity_macro,
        fscore_micro: f_score(precision_micro, sensitivity_micro, beta),
        fscore_macro: f_score(precision_macro, sensitivity_macro, beta),
    })
}

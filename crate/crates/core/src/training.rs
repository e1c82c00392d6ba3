//! Per-sample gradient-descent training with momentum.
//!
//! Each epoch visits the training examples in a freshly shuffled order
//! and updates every weight after every example. The error terms are
//! the classic sigmoid deltas — `o(1-o)(t-o)` at the output layer and
//! `o(1-o) * Σ w·δ` at the hidden layer — and each update carries a
//! `mu` fraction of the previous update for that weight (momentum).
//! Biases are updated like any other weight, with a constant input
//! of 1.
//!
//! The delta expressions assume unit sigmoid steepness; with
//! `TrainConfig::c != 1` the update is a per-layer rescaling of the
//! gradient rather than the exact gradient.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::network::{argmax, init_weights, Activation, MlpNetwork};
use crate::scalar::Scalar;

/// Hyperparameters for one training run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig<T> {
    /// Learning rate, `> 0`.
    pub eta: T,
    /// Momentum factor in `[0, 1)`.
    pub mu: T,
    /// Sigmoid steepness applied by the network.
    pub c: T,
    /// F-score weight used downstream by evaluation.
    pub beta: T,
    /// Hidden-layer width.
    pub n_hidden: usize,
    /// Fixed epoch budget (the stopping criterion).
    pub epochs: usize,
    /// Echo of the seed that created the generator passed to
    /// [`train`]; recorded for persistence, not consumed here.
    pub seed: u64,
}

impl<T: Scalar> Default for TrainConfig<T> {
    fn default() -> Self {
        TrainConfig {
            eta: T::from_real(0.3),
            mu: T::from_real(0.1),
            c: T::one(),
            beta: T::one(),
            n_hidden: 60,
            epochs: 500,
            seed: 0,
        }
    }
}

impl<T: Scalar> TrainConfig<T> {
    /// Checks every hyperparameter range.
    pub fn validate(&self) -> Result<()> {
        if !(self.eta.is_finite() && self.eta > T::zero()) {
            return Err(Error::InvalidConfig("eta must be positive".into()));
        }
        if !(self.mu.is_finite() && self.mu >= T::zero() && self.mu < T::one()) {
            return Err(Error::InvalidConfig("mu must lie in [0, 1)".into()));
        }
        if !(self.c.is_finite() && self.c > T::zero()) {
            return Err(Error::InvalidConfig("c must be positive".into()));
        }
        if !(self.beta.is_finite() && self.beta > T::zero()) {
            return Err(Error::InvalidConfig("beta must be positive".into()));
        }
        if self.n_hidden == 0 {
            return Err(Error::InvalidConfig("n_hidden must be at least 1".into()));
        }
        if self.epochs == 0 {
            return Err(Error::InvalidConfig("epochs must be at least 1".into()));
        }
        Ok(())
    }
}

/// One input vector with its one-hot target.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingExample<T> {
    /// Feature vector, `n_in` entries in `[0, 1]`.
    pub x: Vec<T>,
    /// Target vector: exactly one entry is 1, the rest 0.
    pub t: Vec<T>,
}

impl<T: Scalar> TrainingExample<T> {
    /// Class index encoded by the one-hot target.
    pub fn label(&self) -> usize {
        argmax(&self.t)
    }
}

/// Encodes a class index as a one-hot vector of length `m`.
///
/// # Errors
///
/// Rejects `label >= m`.
pub fn encode_one_hot<T: Scalar>(label: usize, m: usize) -> Result<Vec<T>> {
    if label >= m {
        return Err(Error::InvalidConfig(format!(
            "label {label} out of range for {m} classes"
        )));
    }
    let mut t = vec![T::zero(); m];
    t[label] = T::one();
    Ok(t)
}

/// Materializes the rows selected by `indices` as training examples
/// with one-hot targets.
///
/// # Errors
///
/// Rejects out-of-range indices.
pub fn one_hot_examples<T: Scalar>(
    dataset: &Dataset<T>,
    indices: &[usize],
) -> Result<Vec<TrainingExample<T>>> {
    let m = dataset.n_classes();
    indices
        .iter()
        .map(|&i| {
            if i >= dataset.len() {
                return Err(Error::InvalidConfig(format!(
                    "row index {i} out of range for {} instances",
                    dataset.len()
                )));
            }
            Ok(TrainingExample {
                x: dataset.row(i).to_vec(),
                t: encode_one_hot(dataset.label(i), m)?,
            })
        })
        .collect()
}

/// Reusable per-sample backpropagation buffers, including the previous
/// update for every weight (the momentum state, zero before the first
/// update).
#[derive(Debug, Clone)]
pub struct BackpropScratch<T> {
    /// Output-layer error terms, one per output unit.
    pub delta_out: Vec<T>,
    /// Hidden-layer error terms, one per hidden unit.
    pub delta_hidden: Vec<T>,
    /// Previous update per hidden-layer weight, same layout as the
    /// network's hidden weights.
    pub prev_hidden_updates: Vec<T>,
    /// Previous update per output-layer weight.
    pub prev_output_updates: Vec<T>,
    /// Forward-pass buffer.
    pub act: Activation<T>,
}

impl<T: Scalar> BackpropScratch<T> {
    /// Creates zeroed scratch sized for `net`.
    pub fn for_net(net: &MlpNetwork<T>) -> Self {
        BackpropScratch {
            delta_out: vec![T::zero(); net.n_out()],
            delta_hidden: vec![T::zero(); net.n_hidden()],
            prev_hidden_updates: vec![T::zero(); net.hidden_weights().len()],
            prev_output_updates: vec![T::zero(); net.output_weights().len()],
            act: Activation::zeros(net.n_hidden(), net.n_out()),
        }
    }
}

/// Output-unit error term `o_k (1 - o_k) (t_k - o_k)`.
pub fn output_delta<T: Scalar>(o_k: T, t_k: T) -> T {
    o_k * (T::one() - o_k) * (t_k - o_k)
}

/// Hidden-unit error term `o_h (1 - o_h) Σ_k w_kh δ_k`.
///
/// `downstream_weights` are the weights from this hidden unit to every
/// output unit.
///
/// # Errors
///
/// Rejects mismatched vector lengths.
pub fn hidden_delta<T: Scalar>(o_h: T, downstream_weights: &[T], delta_out: &[T]) -> Result<T> {
    if downstream_weights.len() != delta_out.len() {
        return Err(Error::DimensionMismatch {
            expected: delta_out.len(),
            got: downstream_weights.len(),
        });
    }
    let mut sum = T::zero();
    for (&w, &d) in downstream_weights.iter().zip(delta_out) {
        sum += w * d;
    }
    Ok(o_h * (T::one() - o_h) * sum)
}

/// One momentum update: `Δw = eta·delta·input + mu·prev_update`.
/// Returns `(new_weight, Δw)`.
pub fn apply_update<T: Scalar>(weight: T, delta: T, input: T, prev_update: T, eta: T, mu: T) -> (T, T) {
    let dw = eta * delta * input + mu * prev_update;
    (weight + dw, dw)
}

/// Runs one per-sample update: forward pass, both delta layers, then a
/// momentum update of every weight (biases use a constant input of 1).
///
/// The hidden deltas are computed against the pre-update output
/// weights, so with `mu = 0` the applied update equals `eta` times the
/// negative gradient of the per-sample squared error `½ Σ_k (t_k - o_k)²`.
/// After the call, `scratch.prev_*_updates` hold exactly the updates
/// just applied.
///
/// # Errors
///
/// Rejects examples whose input or target arity does not match `net`.
pub fn sgd_step<T: Scalar>(
    net: &mut MlpNetwork<T>,
    scratch: &mut BackpropScratch<T>,
    example: &TrainingExample<T>,
    config: &TrainConfig<T>,
) -> Result<()> {
    let n_in = net.n_in();
    let n_hidden = net.n_hidden();
    let n_out = net.n_out();
    if example.t.len() != n_out {
        return Err(Error::DimensionMismatch {
            expected: n_out,
            got: example.t.len(),
        });
    }

    let BackpropScratch {
        delta_out,
        delta_hidden,
        prev_hidden_updates,
        prev_output_updates,
        act,
    } = scratch;

    net.forward_into(&example.x, act)?;

    for k in 0..n_out {
        delta_out[k] = output_delta(act.output[k], example.t[k]);
    }
    // Hidden deltas must see the output weights as they were during the
    // forward pass, so compute all of them before touching any weight.
    for h in 0..n_hidden {
        let row = &net.output_weights()[h * n_out..(h + 1) * n_out];
        delta_hidden[h] = hidden_delta(act.hidden[h], row, delta_out)?;
    }

    let eta = config.eta;
    let mu = config.mu;

    let out_w = net.output_weights_mut();
    for j in 0..n_hidden {
        let input = act.hidden[j];
        for k in 0..n_out {
            let idx = j * n_out + k;
            let (w, dw) = apply_update(out_w[idx], delta_out[k], input, prev_output_updates[idx], eta, mu);
            out_w[idx] = w;
            prev_output_updates[idx] = dw;
        }
    }
    // Output bias row: input 1.
    for k in 0..n_out {
        let idx = n_hidden * n_out + k;
        let (w, dw) = apply_update(out_w[idx], delta_out[k], T::one(), prev_output_updates[idx], eta, mu);
        out_w[idx] = w;
        prev_output_updates[idx] = dw;
    }

    let hid_w = net.hidden_weights_mut();
    for i in 0..n_in {
        let input = example.x[i];
        for j in 0..n_hidden {
            let idx = i * n_hidden + j;
            let (w, dw) = apply_update(hid_w[idx], delta_hidden[j], input, prev_hidden_updates[idx], eta, mu);
            hid_w[idx] = w;
            prev_hidden_updates[idx] = dw;
        }
    }
    // Hidden bias row: input 1.
    for j in 0..n_hidden {
        let idx = n_in * n_hidden + j;
        let (w, dw) = apply_update(hid_w[idx], delta_hidden[j], T::one(), prev_hidden_updates[idx], eta, mu);
        hid_w[idx] = w;
        prev_hidden_updates[idx] = dw;
    }
    Ok(())
}

/// Mean summed squared error over a set of examples:
/// `(1/n) Σ_i Σ_k (t_ik - o_ik)²`.
///
/// Note the per-output sum: with one-hot targets over `m` outputs the
/// value can exceed 1 (a net stuck at 0.5 everywhere scores `m/4`).
///
/// # Errors
///
/// Rejects an empty example set and arity mismatches.
pub fn mse<T: Scalar>(net: &MlpNetwork<T>, examples: &[TrainingExample<T>]) -> Result<T> {
    let mut act = Activation::zeros(net.n_hidden(), net.n_out());
    mse_with(net, examples, &mut act)
}

/// [`mse`] with a caller-supplied activation buffer.
pub fn mse_with<T: Scalar>(
    net: &MlpNetwork<T>,
    examples: &[TrainingExample<T>],
    act: &mut Activation<T>,
) -> Result<T> {
    if examples.is_empty() {
        return Err(Error::Empty("example set"));
    }
    let mut total = T::zero();
    for ex in examples {
        if ex.t.len() != net.n_out() {
            return Err(Error::DimensionMismatch {
                expected: net.n_out(),
                got: ex.t.len(),
            });
        }
        net.forward_into(&ex.x, act)?;
        for (&t, &o) in ex.t.iter().zip(act.output.iter()) {
            let r = t - o;
            total += r * r;
        }
    }
    Ok(total / T::from_count(examples.len() as u64))
}

/// Result of one training run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainOutcome<T> {
    /// The trained network.
    pub net: MlpNetwork<T>,
    /// Training-set MSE measured after each epoch (`epochs` entries);
    /// the last entry is what reports call the training MSE.
    pub mse_trace: Vec<T>,
    /// Wall-clock training duration in seconds. The only
    /// non-deterministic field.
    pub train_time_s: T,
}

/// Trains a fresh network on the selected rows of `dataset`.
///
/// Initializes weights uniformly on [-0.5, 0.5] from `rng`, then runs
/// `config.epochs` epochs of per-sample updates, reshuffling the visit
/// order every epoch from the same generator. Fully deterministic given
/// the generator state, except for `train_time_s`.
///
/// # Errors
///
/// Rejects invalid configs, empty index lists, and out-of-range
/// indices.
pub fn train<T: Scalar, R: Rng + ?Sized>(
    dataset: &Dataset<T>,
    indices: &[usize],
    config: &TrainConfig<T>,
    rng: &mut R,
) -> Result<TrainOutcome<T>> {
    config.validate()?;
    if indices.is_empty() {
        return Err(Error::Empty("training set"));
    }
    let examples = one_hot_examples(dataset, indices)?;

    let mut net: MlpNetwork<T> =
        init_weights(dataset.n_features(), config.n_hidden, dataset.n_classes(), rng)?;
    net.set_steepness(config.c)?;

    let mut scratch = BackpropScratch::for_net(&net);
    let mut eval_act = Activation::zeros(net.n_hidden(), net.n_out());
    let mut order: Vec<usize> = (0..examples.len()).collect();
    let mut mse_trace = Vec::with_capacity(config.epochs);

    let start = Instant::now();
    for _ in 0..config.epochs {
        order.shuffle(rng);
        for &p in &order {
            sgd_step(&mut net, &mut scratch, &examples[p], config)?;
        }
        mse_trace.push(mse_with(&net, &examples, &mut eval_act)?);
    }
    let train_time_s = T::from_real(start.elapsed().as_secs_f64());

    Ok(TrainOutcome {
        net,
        mse_trace,
        train_time_s,
    })
}

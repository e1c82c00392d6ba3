//! Single-hidden-layer perceptron: weights, forward pass, prediction.
//!
//! The network is two fully connected sigmoid layers. Biases are stored
//! as an extra weight row driven by a constant input of 1, so the full
//! parameter set is a flat weight collection of size
//! `(n_in + 1) * n_hidden + (n_hidden + 1) * n_out`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Logistic sigmoid `1 / (1 + e^(-c*y))` with steepness `c`.
///
/// Saturates smoothly at the extremes; never panics for finite input.
pub fn sigmoid<T: Scalar>(y: T, c: T) -> T {
    T::one() / (T::one() + (-c * y).exp())
}

/// Hidden and output activations produced by one forward pass.
///
/// Every entry lies strictly inside (0, 1) — the open range of the
/// sigmoid.
#[derive(Debug, Clone, PartialEq)]
pub struct Activation<T> {
    /// One value per hidden unit.
    pub hidden: Vec<T>,
    /// One value per output unit.
    pub output: Vec<T>,
}

impl<T: Scalar> Activation<T> {
    /// Creates a zeroed activation buffer for the given layer sizes.
    pub fn zeros(n_hidden: usize, n_out: usize) -> Self {
        Activation {
            hidden: vec![T::zero(); n_hidden],
            output: vec![T::zero(); n_out],
        }
    }
}

/// Feed-forward network with one sigmoid hidden layer.
///
/// Weight layout is row-major with inputs as rows: hidden weight
/// `(i, j)` sits at `i * n_hidden + j`, and row `n_in` holds the hidden
/// biases. The output layer follows the same scheme with hidden units
/// as rows and row `n_hidden` as the output biases.
///
/// Serializes to a flat JSON dump of the dimensions, the steepness, and
/// the two weight arrays — enough to reload and reproduce predictions
/// bit-exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpNetwork<T> {
    n_in: usize,
    n_hidden: usize,
    n_out: usize,
    steepness: T,
    hidden_weights: Vec<T>,
    output_weights: Vec<T>,
}

impl<T: Scalar> MlpNetwork<T> {
    /// Builds a network from explicit weights.
    ///
    /// # Errors
    ///
    /// Rejects zero dimensions, weight vectors of the wrong length,
    /// non-finite weights, and non-positive steepness.
    pub fn new(
        n_in: usize,
        n_hidden: usize,
        n_out: usize,
        steepness: T,
        hidden_weights: Vec<T>,
        output_weights: Vec<T>,
    ) -> Result<Self> {
        let net = MlpNetwork {
            n_in,
            n_hidden,
            n_out,
            steepness,
            hidden_weights,
            output_weights,
        };
        net.validate()?;
        Ok(net)
    }

    /// Checks every structural invariant; useful after deserializing.
    pub fn validate(&self) -> Result<()> {
        if self.n_in == 0 || self.n_hidden == 0 || self.n_out == 0 {
            return Err(Error::InvalidConfig(
                "network dimensions must all be at least 1".into(),
            ));
        }
        let expect_hidden = (self.n_in + 1) * self.n_hidden;
        if self.hidden_weights.len() != expect_hidden {
            return Err(Error::DimensionMismatch {
                expected: expect_hidden,
                got: self.hidden_weights.len(),
            });
        }
        let expect_output = (self.n_hidden + 1) * self.n_out;
        if self.output_weights.len() != expect_output {
            return Err(Error::DimensionMismatch {
                expected: expect_output,
                got: self.output_weights.len(),
            });
        }
        if !(self.steepness.is_finite() && self.steepness > T::zero()) {
            return Err(Error::InvalidConfig(
                "sigmoid steepness must be positive and finite".into(),
            ));
        }
        let all_finite = self
            .hidden_weights
            .iter()
            .chain(self.output_weights.iter())
            .all(|w| w.is_finite());
        if !all_finite {
            return Err(Error::NonFinite("network weights".into()));
        }
        Ok(())
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_hidden(&self) -> usize {
        self.n_hidden
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    /// Sigmoid steepness applied by both layers (1 unless overridden).
    pub fn steepness(&self) -> T {
        self.steepness
    }

    /// Replaces the sigmoid steepness used by both layers.
    ///
    /// # Errors
    ///
    /// Rejects values that are not finite and strictly positive.
    pub fn set_steepness(&mut self, c: T) -> Result<()> {
        if !c.is_finite() || c <= T::zero() {
            return Err(Error::InvalidConfig(format!(
                "sigmoid steepness must be finite and positive, got {c}"
            )));
        }
        self.steepness = c;
        Ok(())
    }

    /// Total number of trainable parameters, biases included:
    /// `(n_in + 1) * n_hidden + (n_hidden + 1) * n_out`.
    pub fn weight_count(&self) -> usize {
        (self.n_in + 1) * self.n_hidden + (self.n_hidden + 1) * self.n_out
    }

    /// Hidden-layer weights, `(n_in + 1) x n_hidden` row-major.
    pub fn hidden_weights(&self) -> &[T] {
        &self.hidden_weights
    }

    /// Output-layer weights, `(n_hidden + 1) x n_out` row-major.
    pub fn output_weights(&self) -> &[T] {
        &self.output_weights
    }

    /// Mutable hidden-layer weights (training and gradient probes).
    pub fn hidden_weights_mut(&mut self) -> &mut [T] {
        &mut self.hidden_weights
    }

    /// Mutable output-layer weights (training and gradient probes).
    pub fn output_weights_mut(&mut self) -> &mut [T] {
        &mut self.output_weights
    }

    /// Flat index of hidden weight `(input, hidden)`; `input == n_in`
    /// addresses the bias row.
    pub fn hidden_index(&self, input: usize, hidden: usize) -> usize {
        input * self.n_hidden + hidden
    }

    /// Flat index of output weight `(hidden, out)`; `hidden == n_hidden`
    /// addresses the bias row.
    pub fn output_index(&self, hidden: usize, out: usize) -> usize {
        hidden * self.n_out + out
    }

    /// Runs the forward pass into a caller-supplied buffer, resizing it
    /// if needed. This is the allocation-free path used by training.
    ///
    /// # Errors
    ///
    /// Returns a dimension mismatch if `x` does not have `n_in` entries.
    pub fn forward_into(&self, x: &[T], act: &mut Activation<T>) -> Result<()> {
        if x.len() != self.n_in {
            return Err(Error::DimensionMismatch {
                expected: self.n_in,
                got: x.len(),
            });
        }
        act.hidden.resize(self.n_hidden, T::zero());
        act.output.resize(self.n_out, T::zero());

        // Start from the bias row, then accumulate one input row at a
        // time so the row-major weight layout is walked contiguously.
        let bias = &self.hidden_weights[self.n_in * self.n_hidden..];
        act.hidden.copy_from_slice(bias);
        for (i, &xi) in x.iter().enumerate() {
            let row = &self.hidden_weights[i * self.n_hidden..(i + 1) * self.n_hidden];
            for (acc, &w) in act.hidden.iter_mut().zip(row) {
                *acc += w * xi;
            }
        }
        for h in act.hidden.iter_mut() {
            *h = sigmoid(*h, self.steepness);
        }

        let bias = &self.output_weights[self.n_hidden * self.n_out..];
        act.output.copy_from_slice(bias);
        for (j, &hj) in act.hidden.iter().enumerate() {
            let row = &self.output_weights[j * self.n_out..(j + 1) * self.n_out];
            for (acc, &w) in act.output.iter_mut().zip(row) {
                *acc += w * hj;
            }
        }
        for o in act.output.iter_mut() {
            *o = sigmoid(*o, self.steepness);
        }
        Ok(())
    }

    /// Runs the forward pass and returns fresh activations.
    pub fn forward(&self, x: &[T]) -> Result<Activation<T>> {
        let mut act = Activation::zeros(self.n_hidden, self.n_out);
        self.forward_into(x, &mut act)?;
        Ok(act)
    }

    /// Predicts the class of `x`: the index of the largest output
    /// activation, ties broken toward the lowest index.
    pub fn predict(&self, x: &[T]) -> Result<usize> {
        let mut act = Activation::zeros(self.n_hidden, self.n_out);
        self.predict_with(x, &mut act)
    }

    /// [`predict`](Self::predict) with a reusable activation buffer.
    pub fn predict_with(&self, x: &[T], act: &mut Activation<T>) -> Result<usize> {
        self.forward_into(x, act)?;
        Ok(argmax(&act.output))
    }

    /// Serializes the network to JSON.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    /// Reloads a network from [`to_json`](Self::to_json) output and
    /// re-checks its invariants.
    pub fn from_json(text: &str) -> Result<Self> {
        let net: MlpNetwork<T> = serde_json::from_str(text)?;
        net.validate()?;
        Ok(net)
    }
}

/// Index of the largest value; ties break toward the lowest index.
/// Callers guarantee `values` is non-empty.
pub(crate) fn argmax<T: PartialOrd + Copy>(values: &[T]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Draws a fresh network with every weight independently uniform on
/// [-0.5, 0.5] and steepness 1. Deterministic given the generator state.
///
/// # Errors
///
/// Rejects zero dimensions.
pub fn init_weights<T: Scalar, R: Rng + ?Sized>(
    n_in: usize,
    n_hidden: usize,
    n_out: usize,
    rng: &mut R,
) -> Result<MlpNetwork<T>> {
    if n_in == 0 || n_hidden == 0 || n_out == 0 {
        return Err(Error::InvalidConfig(
            "network dimensions must all be at least 1".into(),
        ));
    }
    // Draw in f64 and convert, so the sequence of raw draws is the same
    // for every scalar type.
    let mut draw = |count: usize| -> Vec<T> {
        (0..count)
            .map(|_| T::from_real(rng.gen_range(-0.5..=0.5)))
            .collect()
    };
    let hidden_weights = draw((n_in + 1) * n_hidden);
    let output_weights = draw((n_hidden + 1) * n_out);
    MlpNetwork::new(n_in, n_hidden, n_out, T::one(), hidden_weights, output_weights)
}

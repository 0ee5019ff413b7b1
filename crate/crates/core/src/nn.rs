//! Dense feed-forward network trained with resilient backpropagation.
//!
//! Every parameter (weight or bias) lives in one flat vector. Layer `l`
//! occupies `outputs × inputs` row-major weights followed by `outputs`
//! biases. The Rprop state (per-parameter step sizes and last gradients) is
//! aligned with the same layout.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::normalize::NormBounds;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NnError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("empty batch")]
    EmptyBatch,
    #[error("invalid network: {0}")]
    InvalidNetwork(&'static str),
    #[error("invalid training configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("non-finite parameter after update")]
    NonFinite,
    #[error("training stopped at loss {final_loss:e} after {} evaluations", history.len())]
    DidNotConverge { final_loss: f64, history: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Activation {
    Identity,
    Tanh,
}

impl Activation {
    #[inline]
    pub fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Identity => z,
            Activation::Tanh => libm::tanh(z),
        }
    }

    /// Derivative expressed through the activation output `a = f(z)`.
    #[inline]
    fn derivative_from_output(self, a: f64) -> f64 {
        match self {
            Activation::Identity => 1.0,
            Activation::Tanh => 1.0 - a * a,
        }
    }
}

/// One training example in normalised units.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub input: Vec<f64>,
    pub target: f64,
}

impl Sample {
    pub fn new(input: Vec<f64>, target: f64) -> Self {
        Self { input, target }
    }
}

/// Half squared error.
#[inline]
pub fn loss(y: f64, y_star: f64) -> f64 {
    let e = y_star - y;
    0.5 * e * e
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct TrainConfig {
    pub mu_up: f64,
    pub mu_down: f64,
    pub mu_init: f64,
    pub mu_min: f64,
    pub mu_max: f64,
    /// Stop once the batch loss is at or below this value.
    pub epsilon: f64,
    pub max_epochs: usize,
    pub rng_seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            mu_up: 1.2,
            mu_down: 0.5,
            mu_init: 0.01,
            mu_min: 1e-6,
            mu_max: 1.0,
            epsilon: 1e-5,
            max_epochs: 5000,
            rng_seed: 42,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), NnError> {
        if !(self.mu_down > 0.0 && self.mu_down < 1.0) {
            return Err(NnError::InvalidConfig("mu_down must lie in (0, 1)"));
        }
        if !(self.mu_up > 1.0) || !self.mu_up.is_finite() {
            return Err(NnError::InvalidConfig("mu_up must exceed 1"));
        }
        if !(self.mu_min > 0.0 && self.mu_min <= self.mu_init && self.mu_init <= self.mu_max) {
            return Err(NnError::InvalidConfig("need 0 < mu_min <= mu_init <= mu_max"));
        }
        if self.epsilon.is_nan() || self.epsilon < 0.0 {
            return Err(NnError::InvalidConfig("epsilon must be non-negative"));
        }
        Ok(())
    }
}

/// Next step size from the signs of two consecutive gradients.
///
/// Grows by `mu_up` on agreement, shrinks by `mu_down` on a sign flip and is
/// kept when either gradient is zero; the result is clamped to
/// `[mu_min, mu_max]`.
pub fn adapt_step(g_prev: f64, g_now: f64, mu_prev: f64, cfg: &TrainConfig) -> f64 {
    let mu = match sign(g_prev) * sign(g_now) {
        s if s > 0.0 => cfg.mu_up * mu_prev,
        s if s < 0.0 => cfg.mu_down * mu_prev,
        _ => mu_prev,
    };
    mu.clamp(cfg.mu_min, cfg.mu_max)
}

#[inline]
fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Per-parameter step sizes and last gradients (iRprop⁻).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RpropState {
    pub step_sizes: Vec<f64>,
    pub prev_gradients: Vec<f64>,
}

impl RpropState {
    pub fn new(n_params: usize, mu_init: f64) -> Self {
        Self { step_sizes: vec![mu_init; n_params], prev_gradients: vec![0.0; n_params] }
    }

    pub fn len(&self) -> usize {
        self.step_sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.step_sizes.is_empty()
    }

    /// One sign-based update: each parameter moves by `−sign(g)·μ`. On a sign
    /// flip the step shrinks, the parameter stays put and the stored gradient
    /// is zeroed so the next call takes the neutral branch.
    pub fn update(&mut self, params: &mut [f64], grads: &[f64], cfg: &TrainConfig) -> Result<(), NnError> {
        if params.len() != grads.len() || params.len() != self.len() {
            return Err(NnError::DimensionMismatch { expected: params.len(), got: grads.len() });
        }
        for (j, (w, &g)) in params.iter_mut().zip(grads).enumerate() {
            let prev = self.prev_gradients[j];
            let mu = adapt_step(prev, g, self.step_sizes[j], cfg);
            self.step_sizes[j] = mu;
            if sign(prev) * sign(g) < 0.0 {
                self.prev_gradients[j] = 0.0;
                continue;
            }
            *w -= sign(g) * mu;
            self.prev_gradients[j] = g;
        }
        if params.iter().any(|w| !w.is_finite()) {
            return Err(NnError::NonFinite);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayerShape {
    pub inputs: usize,
    pub outputs: usize,
    pub activation: Activation,
    offset: usize,
}

impl LayerShape {
    fn n_weights(&self) -> usize {
        self.inputs * self.outputs
    }

    fn n_params(&self) -> usize {
        self.n_weights() + self.outputs
    }
}

/// Outcome of a training run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainReport {
    /// Batch loss before each update, plus the final evaluation.
    pub history: Vec<f64>,
    pub final_loss: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    layers: Vec<LayerShape>,
    params: Vec<f64>,
    rprop: RpropState,
    bounds: NormBounds,
}

impl Network {
    /// Default MPPT architecture: 2 inputs, two tanh hidden layers of 20
    /// neurons, one linear output.
    pub fn mppt(bounds: NormBounds, seed: u64) -> Self {
        Self::new(&[2, 20, 20, 1], &[Activation::Tanh, Activation::Tanh, Activation::Identity], bounds, seed)
            .expect("static architecture is valid")
    }

    /// Builds a network with weights and biases drawn uniformly from
    /// `[−1/√fan_in, 1/√fan_in]`.
    pub fn new(
        layer_sizes: &[usize],
        activations: &[Activation],
        bounds: NormBounds,
        seed: u64,
    ) -> Result<Self, NnError> {
        let mut net = Self::zeroed(layer_sizes, activations, bounds)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for layer in &net.layers {
            let limit = 1.0 / libm::sqrt(layer.inputs as f64);
            for w in &mut net.params[layer.offset..layer.offset + layer.n_params()] {
                *w = rng.random_range(-limit..=limit);
            }
        }
        Ok(net)
    }

    pub fn zeroed(layer_sizes: &[usize], activations: &[Activation], bounds: NormBounds) -> Result<Self, NnError> {
        if layer_sizes.len() < 2 {
            return Err(NnError::InvalidNetwork("need at least an input and an output layer"));
        }
        if activations.len() != layer_sizes.len() - 1 {
            return Err(NnError::DimensionMismatch { expected: layer_sizes.len() - 1, got: activations.len() });
        }
        if layer_sizes.contains(&0) {
            return Err(NnError::InvalidNetwork("layer sizes must be non-zero"));
        }
        let mut layers = Vec::with_capacity(activations.len());
        let mut offset = 0;
        for (pair, &activation) in layer_sizes.windows(2).zip(activations) {
            let shape = LayerShape { inputs: pair[0], outputs: pair[1], activation, offset };
            offset += shape.n_params();
            layers.push(shape);
        }
        Ok(Self { layers, params: vec![0.0; offset], rprop: RpropState::default(), bounds })
    }

    /// Rebuilds a network from stored per-layer weights (row-major) and biases.
    pub fn from_parts(
        layer_sizes: &[usize],
        activations: &[Activation],
        weights: &[Vec<f64>],
        biases: &[Vec<f64>],
        bounds: NormBounds,
    ) -> Result<Self, NnError> {
        let mut net = Self::zeroed(layer_sizes, activations, bounds)?;
        if weights.len() != net.layers.len() || biases.len() != net.layers.len() {
            return Err(NnError::DimensionMismatch {
                expected: net.layers.len(),
                got: weights.len().min(biases.len()),
            });
        }
        for (l, layer) in net.layers.clone().iter().enumerate() {
            if weights[l].len() != layer.n_weights() {
                return Err(NnError::DimensionMismatch { expected: layer.n_weights(), got: weights[l].len() });
            }
            if biases[l].len() != layer.outputs {
                return Err(NnError::DimensionMismatch { expected: layer.outputs, got: biases[l].len() });
            }
            net.params[layer.offset..layer.offset + layer.n_weights()].copy_from_slice(&weights[l]);
            net.params[layer.offset + layer.n_weights()..layer.offset + layer.n_params()].copy_from_slice(&biases[l]);
        }
        if net.params.iter().any(|w| !w.is_finite()) {
            return Err(NnError::NonFinite);
        }
        Ok(net)
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![self.layers[0].inputs];
        sizes.extend(self.layers.iter().map(|l| l.outputs));
        sizes
    }

    pub fn layers(&self) -> &[LayerShape] {
        &self.layers
    }

    pub fn activations(&self) -> Vec<Activation> {
        self.layers.iter().map(|l| l.activation).collect()
    }

    /// Row-major `outputs × inputs` weight matrix of layer `l`.
    pub fn weights(&self, l: usize) -> &[f64] {
        let layer = &self.layers[l];
        &self.params[layer.offset..layer.offset + layer.n_weights()]
    }

    pub fn biases(&self, l: usize) -> &[f64] {
        let layer = &self.layers[l];
        &self.params[layer.offset + layer.n_weights()..layer.offset + layer.n_params()]
    }

    /// All parameters in layout order.
    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    pub fn bounds(&self) -> &NormBounds {
        &self.bounds
    }

    pub fn rprop_state(&self) -> &RpropState {
        &self.rprop
    }

    pub fn n_inputs(&self) -> usize {
        self.layers[0].inputs
    }

    pub fn n_outputs(&self) -> usize {
        self.layers[self.layers.len() - 1].outputs
    }

    /// All output activations for `input`.
    pub fn predict(&self, input: &[f64]) -> Result<Vec<f64>, NnError> {
        if input.len() != self.n_inputs() {
            return Err(NnError::DimensionMismatch { expected: self.n_inputs(), got: input.len() });
        }
        let mut a = input.to_vec();
        for layer in &self.layers {
            a = self.layer_forward(layer, &a);
        }
        Ok(a)
    }

    /// Scalar output for `input`; the network must have a single output.
    pub fn forward(&self, input: &[f64]) -> Result<f64, NnError> {
        if self.n_outputs() != 1 {
            return Err(NnError::DimensionMismatch { expected: 1, got: self.n_outputs() });
        }
        Ok(self.predict(input)?[0])
    }

    fn layer_forward(&self, layer: &LayerShape, a: &[f64]) -> Vec<f64> {
        let w = &self.params[layer.offset..layer.offset + layer.n_weights()];
        let b = &self.params[layer.offset + layer.n_weights()..layer.offset + layer.n_params()];
        w.chunks_exact(layer.inputs)
            .zip(b)
            .map(|(row, bias)| {
                let z = row.iter().zip(a).fold(*bias, |acc, (wi, ai)| acc + wi * ai);
                layer.activation.apply(z)
            })
            .collect()
    }

    /// Summed half squared error over `batch`.
    pub fn batch_loss(&self, batch: &[Sample]) -> Result<f64, NnError> {
        batch.iter().try_fold(0.0, |acc, s| Ok(acc + loss(self.forward(&s.input)?, s.target)))
    }

    /// Gradient of the summed batch loss with respect to every parameter,
    /// in layout order.
    pub fn backward(&self, batch: &[Sample]) -> Result<Vec<f64>, NnError> {
        if batch.is_empty() {
            return Err(NnError::EmptyBatch);
        }
        if self.n_outputs() != 1 {
            return Err(NnError::DimensionMismatch { expected: 1, got: self.n_outputs() });
        }
        let mut grad = vec![0.0; self.params.len()];
        let mut acts: Vec<Vec<f64>> = Vec::with_capacity(self.layers.len() + 1);
        for sample in batch {
            if sample.input.len() != self.n_inputs() {
                return Err(NnError::DimensionMismatch { expected: self.n_inputs(), got: sample.input.len() });
            }
            acts.clear();
            acts.push(sample.input.clone());
            for layer in &self.layers {
                let next = self.layer_forward(layer, &acts[acts.len() - 1]);
                acts.push(next);
            }

            let last = self.layers.len() - 1;
            let y = acts[last + 1][0];
            let mut delta = vec![(y - sample.target) * self.layers[last].activation.derivative_from_output(y)];

            for l in (0..self.layers.len()).rev() {
                let layer = self.layers[l];
                let input = &acts[l];
                let (gw, gb) = grad[layer.offset..layer.offset + layer.n_params()].split_at_mut(layer.n_weights());
                for (o, &d) in delta.iter().enumerate() {
                    for (gwi, &ai) in gw[o * layer.inputs..(o + 1) * layer.inputs].iter_mut().zip(input) {
                        *gwi += d * ai;
                    }
                    gb[o] += d;
                }
                if l == 0 {
                    break;
                }
                let w = &self.params[layer.offset..layer.offset + layer.n_weights()];
                let below = self.layers[l - 1].activation;
                delta = (0..layer.inputs)
                    .map(|j| {
                        let back: f64 = delta.iter().enumerate().map(|(o, d)| w[o * layer.inputs + j] * d).sum();
                        back * below.derivative_from_output(input[j])
                    })
                    .collect();
            }
        }
        Ok(grad)
    }

    /// Applies one iRprop⁻ step with `grads`, initialising the optimiser
    /// state on first use.
    pub fn rprop_update(&mut self, grads: &[f64], cfg: &TrainConfig) -> Result<(), NnError> {
        if self.rprop.len() != self.params.len() {
            self.rprop = RpropState::new(self.params.len(), cfg.mu_init);
        }
        self.rprop.update(&mut self.params, grads, cfg)
    }

    /// Full-batch training: evaluate the loss, stop once it is at most
    /// `epsilon`, otherwise backpropagate and take an Rprop step, for at most
    /// `max_epochs` updates.
    ///
    /// On non-convergence the network keeps its trained parameters and the
    /// error carries the loss history.
    pub fn train(&mut self, data: &[Sample], cfg: &TrainConfig) -> Result<TrainReport, NnError> {
        cfg.validate()?;
        if data.is_empty() {
            return Err(NnError::EmptyBatch);
        }
        let mut history = Vec::new();
        let mut epoch = 0;
        loop {
            let e = self.batch_loss(data)?;
            history.push(e);
            if e <= cfg.epsilon {
                return Ok(TrainReport { history, final_loss: e });
            }
            if epoch == cfg.max_epochs {
                return Err(NnError::DidNotConverge { final_loss: e, history });
            }
            let grads = self.backward(data)?;
            self.rprop_update(&grads, cfg)?;
            epoch += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bounds() -> NormBounds {
        NormBounds::for_array(115.5)
    }

    #[test]
    fn identity_network_passes_input_through() {
        let net = Network::from_parts(&[1, 1], &[Activation::Identity], &[vec![1.0]], &[vec![0.0]], bounds()).unwrap();
        assert_eq!(net.forward(&[0.7]).unwrap(), 0.7);
    }

    #[test]
    fn zero_network_outputs_zero() {
        let net =
            Network::zeroed(&[2, 20, 20, 1], &[Activation::Tanh, Activation::Tanh, Activation::Identity], bounds())
                .unwrap();
        for x in [[0.0, 0.0], [0.3, 0.9], [1.0, 1.0]] {
            assert_eq!(net.forward(&x).unwrap(), 0.0);
        }
    }

    #[test]
    fn wrong_input_width_is_rejected() {
        let net = Network::mppt(bounds(), 1);
        assert_eq!(net.forward(&[0.5]), Err(NnError::DimensionMismatch { expected: 2, got: 1 }));
    }

    #[test]
    fn loss_values() {
        assert_eq!(loss(0.5, 0.5), 0.0);
        assert_eq!(loss(0.0, 1.0), 0.5);
    }

    #[test]
    fn adapt_step_branches() {
        let cfg = TrainConfig::default();
        assert!((adapt_step(1.0, 2.0, 0.01, &cfg) - 0.012).abs() < 1e-15);
        assert!((adapt_step(1.0, -2.0, 0.01, &cfg) - 0.005).abs() < 1e-15);
        assert_eq!(adapt_step(0.0, -3.0, 0.01, &cfg), 0.01);
        assert_eq!(adapt_step(0.9, 1.0, 0.9, &cfg), 1.0);
        assert_eq!(adapt_step(1.0, -1.0, 1.5e-6, &cfg), 1e-6);
    }

    #[test]
    fn linear_neuron_gradient_closed_form() {
        let (w, b, x, y_star) = (0.8, -0.1, 0.6, 0.9);
        let net = Network::from_parts(&[1, 1], &[Activation::Identity], &[vec![w]], &[vec![b]], bounds()).unwrap();
        let g = net.backward(&[Sample::new(vec![x], y_star)]).unwrap();
        let expected_w = -(y_star - w * x - b) * x;
        let expected_b = -(y_star - w * x - b);
        assert!((g[0] - expected_w).abs() < 1e-15);
        assert!((g[1] - expected_b).abs() < 1e-15);
    }

    #[test]
    fn zero_error_batch_has_zero_gradient() {
        let net = Network::mppt(bounds(), 3);
        let batch: Vec<Sample> =
            [[0.1, 0.2], [0.7, 0.4]].iter().map(|x| Sample::new(x.to_vec(), net.forward(x).unwrap())).collect();
        assert!(net.backward(&batch).unwrap().iter().all(|g| *g == 0.0));
    }

    #[test]
    fn sign_step_ignores_gradient_magnitude() {
        let cfg = TrainConfig::default();
        for g in [1e-9, 3.0, 1e6] {
            let mut state = RpropState::new(1, 0.01);
            let mut p = [0.5];
            state.update(&mut p, &[g], &cfg).unwrap();
            assert!((p[0] - 0.49).abs() < 1e-15);
        }
        let mut state = RpropState::new(1, 0.01);
        let mut p = [0.5];
        state.update(&mut p, &[0.0], &cfg).unwrap();
        assert_eq!(p[0], 0.5);
    }

    #[test]
    fn sign_flip_skips_update_and_forgets_gradient() {
        let cfg = TrainConfig::default();
        let mut state = RpropState::new(1, 0.01);
        let mut p = [0.0];
        state.update(&mut p, &[1.0], &cfg).unwrap();
        state.update(&mut p, &[-1.0], &cfg).unwrap();
        assert!((p[0] + 0.01).abs() < 1e-15);
        assert_eq!(state.step_sizes[0], 0.005);
        assert_eq!(state.prev_gradients[0], 0.0);
        state.update(&mut p, &[-1.0], &cfg).unwrap();
        assert_eq!(state.step_sizes[0], 0.005);
        assert!((p[0] + 0.005).abs() < 1e-15);
    }

    #[test]
    fn infinite_epsilon_returns_initial_network() {
        let mut net = Network::mppt(bounds(), 9);
        let before = net.clone();
        let data = vec![Sample::new(vec![0.5, 0.5], 0.3)];
        let cfg = TrainConfig { epsilon: f64::INFINITY, ..TrainConfig::default() };
        let report = net.train(&data, &cfg).unwrap();
        assert_eq!(report.history.len(), 1);
        assert_eq!(net.params(), before.params());
    }

    #[test]
    fn zero_epochs_is_a_no_op() {
        let mut net = Network::mppt(bounds(), 9);
        let before = net.params().to_vec();
        let data = vec![Sample::new(vec![0.5, 0.5], 0.3)];
        let cfg = TrainConfig { max_epochs: 0, ..TrainConfig::default() };
        match net.train(&data, &cfg) {
            Err(NnError::DidNotConverge { history, .. }) => assert_eq!(history.len(), 1),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(net.params(), &before[..]);
    }

    #[test]
    fn zero_gradient_training_is_a_no_op() {
        let mut net = Network::mppt(bounds(), 5);
        let before = net.params().to_vec();
        let data: Vec<Sample> =
            [[0.2, 0.3], [0.9, 0.1]].iter().map(|x| Sample::new(x.to_vec(), net.forward(x).unwrap())).collect();
        let cfg = TrainConfig { epsilon: 0.0, max_epochs: 20, ..TrainConfig::default() };
        let _ = net.train(&data, &cfg);
        assert_eq!(net.params(), &before[..]);
    }

    #[test]
    fn invalid_config_is_rejected() {
        let cfg = TrainConfig { mu_up: 1.0, ..TrainConfig::default() };
        assert!(cfg.validate().is_err());
        let cfg = TrainConfig { mu_down: 1.0, ..TrainConfig::default() };
        assert!(cfg.validate().is_err());
        let cfg = TrainConfig { mu_init: 2.0, ..TrainConfig::default() };
        assert!(cfg.validate().is_err());
    }
}

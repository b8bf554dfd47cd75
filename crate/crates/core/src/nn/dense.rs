use rand::Rng;
use serde::{Deserialize, Serialize};

use super::matrix::{axpy, dot, Matrix};
use crate::error::{Error, Result};
use crate::rng::StreamRng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Linear,
    Relu,
    Tanh,
}

impl Activation {
    #[inline]
    fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Linear => x,
            Activation::Relu => x.max(0.0),
            Activation::Tanh => x.tanh(),
        }
    }

    /// Derivative expressed through the activation's output.
    #[inline]
    fn derivative_at_output(self, y: f64) -> f64 {
        match self {
            Activation::Linear => 1.0,
            Activation::Relu => {
                if y > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Tanh => 1.0 - y * y,
        }
    }

    pub(crate) fn code(self) -> u8 {
        match self {
            Activation::Linear => 0,
            Activation::Relu => 1,
            Activation::Tanh => 2,
        }
    }

    pub(crate) fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(Activation::Linear),
            1 => Some(Activation::Relu),
            2 => Some(Activation::Tanh),
            _ => None,
        }
    }
}

/// Fully connected layer; `weights` is `fan_out x fan_in`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub fan_in: usize,
    pub fan_out: usize,
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

impl Layer {
    fn zeros(fan_in: usize, fan_out: usize) -> Self {
        Self {
            fan_in,
            fan_out,
            weights: vec![0.0; fan_in * fan_out],
            bias: vec![0.0; fan_out],
        }
    }

    pub fn weight_row(&self, out: usize) -> &[f64] {
        &self.weights[out * self.fan_in..(out + 1) * self.fan_in]
    }

    fn forward_into(&self, input: &Matrix, activation: Activation) -> Matrix {
        let mut out = Matrix::zeros(input.rows(), self.fan_out);
        for i in 0..input.rows() {
            let x = input.row(i);
            let row = out.row_mut(i);
            for (o, y) in row.iter_mut().enumerate() {
                *y = activation.apply(self.bias[o] + dot(x, self.weight_row(o)));
            }
        }
        out
    }
}

/// Dense feed-forward network: hidden layers share one activation, the
/// output layer is linear.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseNet {
    layers: Vec<Layer>,
    hidden: Activation,
}

/// Per-layer inputs recorded by [`DenseNet::forward_cached`].
/// `activations[0]` is the network input, `activations[l + 1]` the output of
/// layer `l`.
#[derive(Debug, Clone)]
pub struct ForwardCache {
    activations: Vec<Matrix>,
}

impl ForwardCache {
    pub fn output(&self) -> &Matrix {
        self.activations.last().expect("cache holds the input")
    }
}

/// Gradients with the exact shapes of a network's parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientSet {
    pub layers: Vec<Layer>,
}

impl GradientSet {
    pub fn zeros_like(net: &DenseNet) -> Self {
        Self {
            layers: net.layers.iter().map(|l| Layer::zeros(l.fan_in, l.fan_out)).collect(),
        }
    }

    fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.layers
            .iter()
            .flat_map(|l| l.weights.iter().chain(&l.bias).copied())
    }

    pub fn squared_norm(&self) -> f64 {
        self.values().map(|g| g * g).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.values().all(f64::is_finite)
    }

    pub fn is_zero(&self) -> bool {
        self.values().all(|g| g == 0.0)
    }

    pub fn scale(&mut self, factor: f64) {
        for l in &mut self.layers {
            l.weights.iter_mut().chain(l.bias.iter_mut()).for_each(|g| *g *= factor);
        }
    }

    pub fn add_assign(&mut self, other: &GradientSet) -> Result<()> {
        if !same_shapes(&self.layers, &other.layers) {
            return Err(Error::shape("gradient sets differ in shape"));
        }
        for (a, b) in self.layers.iter_mut().zip(&other.layers) {
            axpy(1.0, &b.weights, &mut a.weights);
            axpy(1.0, &b.bias, &mut a.bias);
        }
        Ok(())
    }
}

/// Rescale a group of gradient sets so their joint L2 norm is at most
/// `max_norm`. Returns the norm before clipping.
pub fn clip_global_norm(sets: &mut [&mut GradientSet], max_norm: f64) -> f64 {
    let norm = sets.iter().map(|g| g.squared_norm()).sum::<f64>().sqrt();
    if norm > max_norm && norm.is_finite() {
        let factor = max_norm / norm;
        for g in sets.iter_mut() {
            g.scale(factor);
        }
    }
    norm
}

fn same_shapes(a: &[Layer], b: &[Layer]) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(x, y)| x.fan_in == y.fan_in && x.fan_out == y.fan_out)
}

impl DenseNet {
    /// All-zero network with layer sizes `dims` (input first).
    pub fn zeros(dims: &[usize], hidden: Activation) -> Result<Self> {
        if dims.len() < 2 || dims.contains(&0) {
            return Err(Error::shape(format!(
                "network dims {dims:?} need at least two positive sizes"
            )));
        }
        Ok(Self {
            layers: dims.windows(2).map(|w| Layer::zeros(w[0], w[1])).collect(),
            hidden,
        })
    }

    /// Glorot-uniform weights in `±sqrt(6 / (fan_in + fan_out))`, zero biases.
    pub fn init(dims: &[usize], hidden: Activation, rng: &mut StreamRng) -> Result<Self> {
        let mut net = Self::zeros(dims, hidden)?;
        for layer in &mut net.layers {
            let limit = (6.0 / (layer.fan_in + layer.fan_out) as f64).sqrt();
            for w in &mut layer.weights {
                *w = rng.random_range(-limit..=limit);
            }
        }
        Ok(net)
    }

    pub fn from_layers(layers: Vec<Layer>, hidden: Activation) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::shape("network needs at least one layer"));
        }
        for l in &layers {
            if l.weights.len() != l.fan_in * l.fan_out || l.bias.len() != l.fan_out {
                return Err(Error::shape("layer buffers do not match fan-in/fan-out"));
            }
        }
        if layers.windows(2).any(|w| w[0].fan_out != w[1].fan_in) {
            return Err(Error::shape("consecutive layer dimensions do not chain"));
        }
        Ok(Self { layers, hidden })
    }

    pub fn dims(&self) -> Vec<usize> {
        std::iter::once(self.layers[0].fan_in)
            .chain(self.layers.iter().map(|l| l.fan_out))
            .collect()
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].fan_in
    }

    pub fn output_dim(&self) -> usize {
        self.layers[self.layers.len() - 1].fan_out
    }

    pub fn hidden_activation(&self) -> Activation {
        self.hidden
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [Layer] {
        &mut self.layers
    }

    pub fn num_parameters(&self) -> usize {
        self.layers.iter().map(|l| l.weights.len() + l.bias.len()).sum()
    }

    pub fn same_architecture(&self, other: &DenseNet) -> bool {
        self.hidden == other.hidden && same_shapes(&self.layers, &other.layers)
    }

    /// Parameters flattened layer by layer: weights row-major, then biases.
    pub fn parameters(&self) -> Vec<f64> {
        self.layers
            .iter()
            .flat_map(|l| l.weights.iter().chain(&l.bias).copied())
            .collect()
    }

    pub fn parameters_mut(&mut self) -> impl Iterator<Item = &mut f64> {
        self.layers
            .iter_mut()
            .flat_map(|l| l.weights.iter_mut().chain(l.bias.iter_mut()))
    }

    /// FNV-1a style hash over the parameter bit patterns, one word at a time.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for layer in &self.layers {
            for p in layer.weights.iter().chain(&layer.bias) {
                h = (h ^ p.to_bits()).wrapping_mul(0x0100_0000_01b3);
            }
        }
        h
    }

    fn check_input(&self, cols: usize) -> Result<()> {
        if cols != self.input_dim() {
            return Err(Error::shape(format!(
                "input has {cols} features, network expects {}",
                self.input_dim()
            )));
        }
        Ok(())
    }

    fn activation_of(&self, layer: usize) -> Activation {
        if layer + 1 == self.layers.len() {
            Activation::Linear
        } else {
            self.hidden
        }
    }

    pub fn forward(&self, input: &[f64]) -> Result<Vec<f64>> {
        Ok(self.forward_batch(&Matrix::row_vector(input))?.into_vec())
    }

    pub fn forward_batch(&self, input: &Matrix) -> Result<Matrix> {
        self.check_input(input.cols())?;
        let mut x = self.layers[0].forward_into(input, self.activation_of(0));
        for (l, layer) in self.layers.iter().enumerate().skip(1) {
            x = layer.forward_into(&x, self.activation_of(l));
        }
        Ok(x)
    }

    pub fn forward_cached(&self, input: &Matrix) -> Result<(Matrix, ForwardCache)> {
        self.check_input(input.cols())?;
        let mut activations = Vec::with_capacity(self.layers.len() + 1);
        activations.push(input.clone());
        for (l, layer) in self.layers.iter().enumerate() {
            let next = layer.forward_into(&activations[l], self.activation_of(l));
            activations.push(next);
        }
        let output = activations[self.layers.len()].clone();
        Ok((output, ForwardCache { activations }))
    }

    /// Reverse-mode pass for gradient `output_grad` of the loss with respect
    /// to the batch outputs. Returns parameter gradients summed over the
    /// batch and the gradient with respect to the inputs.
    pub fn backward(&self, cache: &ForwardCache, output_grad: &Matrix) -> Result<(GradientSet, Matrix)> {
        if cache.activations.len() != self.layers.len() + 1
            || cache
                .activations
                .iter()
                .skip(1)
                .zip(&self.layers)
                .any(|(a, l)| a.cols() != l.fan_out)
        {
            return Err(Error::shape("forward cache does not belong to this network"));
        }
        let out = cache.output();
        if output_grad.rows() != out.rows() || output_grad.cols() != out.cols() {
            return Err(Error::shape(format!(
                "output gradient is {}x{}, outputs are {}x{}",
                output_grad.rows(),
                output_grad.cols(),
                out.rows(),
                out.cols()
            )));
        }
        let mut grads = GradientSet::zeros_like(self);
        let mut upstream = output_grad.clone();
        for l in (0..self.layers.len()).rev() {
            let layer = &self.layers[l];
            let act = self.activation_of(l);
            let input = &cache.activations[l];
            let output = &cache.activations[l + 1];
            let mut downstream = Matrix::zeros(input.rows(), layer.fan_in);
            let g = &mut grads.layers[l];
            for i in 0..input.rows() {
                let x = input.row(i);
                let up = upstream.row(i);
                let y = output.row(i);
                let down = downstream.row_mut(i);
                for o in 0..layer.fan_out {
                    let delta = up[o] * act.derivative_at_output(y[o]);
                    if delta == 0.0 {
                        continue;
                    }
                    g.bias[o] += delta;
                    axpy(delta, x, &mut g.weights[o * layer.fan_in..(o + 1) * layer.fan_in]);
                    axpy(delta, layer.weight_row(o), down);
                }
            }
            upstream = downstream;
        }
        Ok((grads, upstream))
    }

    /// Plain gradient descent step `theta -= lr * grad`.
    pub fn sgd_apply(&mut self, grads: &GradientSet, lr: f64) -> Result<()> {
        if !same_shapes(&self.layers, &grads.layers) {
            return Err(Error::shape("gradients do not match network"));
        }
        if !grads.is_finite() {
            return Err(Error::NonFinite("gradient"));
        }
        for (layer, g) in self.layers.iter_mut().zip(&grads.layers) {
            axpy(-lr, &g.weights, &mut layer.weights);
            axpy(-lr, &g.bias, &mut layer.bias);
        }
        Ok(())
    }

    /// Overwrite `target` with this network's parameters.
    pub fn copy_into(&self, target: &mut DenseNet) -> Result<()> {
        if !self.same_architecture(target) {
            return Err(Error::shape("target network architecture differs"));
        }
        target.layers.clone_from(&self.layers);
        Ok(())
    }
}

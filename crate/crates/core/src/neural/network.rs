use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::NeuralError;

/// Bumped whenever the model file layout changes.
pub const FORMAT_VERSION: u32 = 1;

/// Input range mapped onto [−1, 1].
pub const ALPHA_RANGE: (f64, f64) = (1.1, 1.9);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    /// `tanh(x)`
    Tansig,
    /// `1 / (1 + e^{−x})`
    Logsig,
}

impl Activation {
    pub const BOTH: [Activation; 2] = [Activation::Tansig, Activation::Logsig];

    #[inline]
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Tansig => x.tanh(),
            Activation::Logsig => 1.0 / (1.0 + (-x).exp()),
        }
    }

    /// Derivative expressed through the activation's output `y`.
    #[inline]
    pub fn derivative_from_output(self, y: f64) -> f64 {
        match self {
            Activation::Tansig => 1.0 - y * y,
            Activation::Logsig => y * (1.0 - y),
        }
    }

    /// Output range `(lo, hi)`.
    pub fn output_range(self) -> (f64, f64) {
        match self {
            Activation::Tansig => (-1.0, 1.0),
            Activation::Logsig => (0.0, 1.0),
        }
    }

    /// Net-input interval over which the function is far from saturation.
    pub fn active_range(self) -> (f64, f64) {
        match self {
            Activation::Tansig => (-2.0, 2.0),
            Activation::Logsig => (-4.0, 4.0),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Activation::Tansig => "tansig",
            Activation::Logsig => "logsig",
        }
    }
}

impl fmt::Display for Activation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Activation {
    type Err = NeuralError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "tansig" | "tanh" => Ok(Activation::Tansig),
            "logsig" | "logistic" => Ok(Activation::Logsig),
            _ => Err(NeuralError::InvalidSpec(format!("unknown activation {s:?}"))),
        }
    }
}

/// Architecture: one input (α), 1–2 equal-width hidden layers, two linear
/// outputs (τ, ξ).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NetworkSpec {
    pub hidden_layers: usize,
    pub neurons_per_layer: usize,
    pub activations: Vec<Activation>,
}

pub const INPUTS: usize = 1;
pub const OUTPUTS: usize = 2;
pub const NEURON_CHOICES: [usize; 5] = [5, 10, 15, 20, 25];

impl NetworkSpec {
    pub fn new(neurons_per_layer: usize, activations: Vec<Activation>) -> Result<Self, NeuralError> {
        let spec = Self {
            hidden_layers: activations.len(),
            neurons_per_layer,
            activations,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), NeuralError> {
        if !(1..=2).contains(&self.hidden_layers) {
            return Err(NeuralError::InvalidSpec(format!(
                "{} hidden layers; expected 1 or 2",
                self.hidden_layers
            )));
        }
        if self.activations.len() != self.hidden_layers {
            return Err(NeuralError::InvalidSpec(format!(
                "{} activations for {} hidden layers",
                self.activations.len(),
                self.hidden_layers
            )));
        }
        if self.neurons_per_layer == 0 {
            return Err(NeuralError::InvalidSpec("hidden layers need at least one neuron".into()));
        }
        Ok(())
    }

    /// `(outputs, inputs)` of each dense layer, hidden layers first.
    pub fn layer_shapes(&self) -> Vec<(usize, usize)> {
        let n = self.neurons_per_layer;
        let mut shapes = vec![(n, INPUTS)];
        for _ in 1..self.hidden_layers {
            shapes.push((n, n));
        }
        shapes.push((OUTPUTS, n));
        shapes
    }

    pub fn parameter_count(&self) -> usize {
        self.layer_shapes().iter().map(|(o, i)| o * i + o).sum()
    }

    /// The 30 architectures of the sweep: 1 layer × 5 widths × 2 activations,
    /// then 2 layers × 5 widths × 4 activation pairs.
    pub fn sweep_grid() -> Vec<NetworkSpec> {
        let mut out = Vec::with_capacity(30);
        for &n in &NEURON_CHOICES {
            for a in Activation::BOTH {
                out.push(NetworkSpec::new(n, vec![a]).expect("valid grid spec"));
            }
        }
        for &n in &NEURON_CHOICES {
            for a in Activation::BOTH {
                for b in Activation::BOTH {
                    out.push(NetworkSpec::new(n, vec![a, b]).expect("valid grid spec"));
                }
            }
        }
        out
    }

    /// e.g. `1x5 logsig`, `2x25 tansig/tansig`.
    pub fn describe(&self) -> String {
        let acts: Vec<_> = self.activations.iter().map(|a| a.label()).collect();
        format!(
            "{}x{} {}",
            self.hidden_layers,
            self.neurons_per_layer,
            acts.join("/")
        )
    }
}

/// Affine map of `[min, max]` onto `[−1, 1]`.
///
/// A degenerate range maps its single value to 0 with unit half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    pub min: f64,
    pub max: f64,
}

impl AffineMap {
    pub fn new(min: f64, max: f64) -> Self {
        Self { min, max }
    }

    fn centre_and_half_width(&self) -> (f64, f64) {
        let half = 0.5 * (self.max - self.min);
        let centre = 0.5 * (self.max + self.min);
        if half > 0.0 {
            (centre, half)
        } else {
            (centre, 1.0)
        }
    }

    pub fn forward(&self, x: f64) -> f64 {
        let (c, h) = self.centre_and_half_width();
        (x - c) / h
    }

    pub fn inverse(&self, y: f64) -> f64 {
        let (c, h) = self.centre_and_half_width();
        y * h + c
    }

    fn is_valid(&self) -> bool {
        self.min.is_finite() && self.max.is_finite() && self.max >= self.min
    }
}

/// One dense layer; `weights` is row-major `rows × cols` (rows = outputs).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub rows: usize,
    pub cols: usize,
    pub weights: Vec<f64>,
    pub biases: Vec<f64>,
}

impl Layer {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            weights: vec![0.0; rows * cols],
            biases: vec![0.0; rows],
        }
    }

    #[inline]
    pub fn weight(&self, r: usize, c: usize) -> f64 {
        self.weights[r * self.cols + c]
    }

    fn affine_into(&self, input: &[f64], out: &mut Vec<f64>) {
        out.clear();
        for r in 0..self.rows {
            let row = &self.weights[r * self.cols..(r + 1) * self.cols];
            let z: f64 = row.iter().zip(input).map(|(w, x)| w * x).sum();
            out.push(z + self.biases[r]);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingMeta {
    pub seed: u64,
    /// `None` until the weights have been trained.
    pub final_mse: Option<f64>,
    pub epochs: usize,
}

/// A complete, self-describing predictor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkWeights {
    pub format_version: u32,
    pub spec: NetworkSpec,
    pub input_map: AffineMap,
    pub output_maps: [AffineMap; OUTPUTS],
    pub layers: Vec<Layer>,
    pub training: TrainingMeta,
}

/// Physical-unit prediction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub tau: f64,
    pub xi: f64,
    /// α fell outside the normalization range.
    pub extrapolated: bool,
}

impl NetworkWeights {
    /// All weights and biases zero.
    pub fn zeroed(spec: NetworkSpec, output_maps: [AffineMap; OUTPUTS]) -> Result<Self, NeuralError> {
        spec.validate()?;
        let layers = spec
            .layer_shapes()
            .into_iter()
            .map(|(r, c)| Layer::zeros(r, c))
            .collect();
        Ok(Self {
            format_version: FORMAT_VERSION,
            spec,
            input_map: AffineMap::new(ALPHA_RANGE.0, ALPHA_RANGE.1),
            output_maps,
            layers,
            training: TrainingMeta {
                seed: 0,
                final_mse: None,
                epochs: 0,
            },
        })
    }

    pub fn validate(&self) -> Result<(), NeuralError> {
        if self.format_version != FORMAT_VERSION {
            return Err(NeuralError::Corrupt(format!(
                "format_version {} unsupported (expected {FORMAT_VERSION})",
                self.format_version
            )));
        }
        self.spec.validate()?;
        let shapes = self.spec.layer_shapes();
        if shapes.len() != self.layers.len() {
            return Err(NeuralError::Corrupt(format!(
                "{} layers stored, spec needs {}",
                self.layers.len(),
                shapes.len()
            )));
        }
        for (k, ((r, c), layer)) in shapes.iter().zip(&self.layers).enumerate() {
            if layer.rows != *r
                || layer.cols != *c
                || layer.weights.len() != r * c
                || layer.biases.len() != *r
            {
                return Err(NeuralError::Corrupt(format!(
                    "layer {k} has shape {}x{} with {} weights/{} biases, expected {r}x{c}",
                    layer.rows,
                    layer.cols,
                    layer.weights.len(),
                    layer.biases.len()
                )));
            }
            if layer.weights.iter().chain(&layer.biases).any(|v| !v.is_finite()) {
                return Err(NeuralError::Corrupt(format!("layer {k} holds non-finite values")));
            }
        }
        if !self.input_map.is_valid() || !self.output_maps.iter().all(AffineMap::is_valid) {
            return Err(NeuralError::Corrupt("normalization range is not finite and ordered".into()));
        }
        Ok(())
    }

    /// Flat parameter vector: per layer, row-major weights then biases.
    pub fn params(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.spec.parameter_count());
        for l in &self.layers {
            out.extend_from_slice(&l.weights);
            out.extend_from_slice(&l.biases);
        }
        out
    }

    pub fn set_params(&mut self, params: &[f64]) {
        let mut k = 0;
        for l in &mut self.layers {
            let nw = l.weights.len();
            l.weights.copy_from_slice(&params[k..k + nw]);
            k += nw;
            let nb = l.biases.len();
            l.biases.copy_from_slice(&params[k..k + nb]);
            k += nb;
        }
        debug_assert_eq!(k, params.len());
    }

    /// Forward pass in normalized units, keeping every layer's output.
    ///
    /// `trace[0]` is the input, `trace[k]` the output of layer `k`; the last
    /// entry is the linear network output.
    pub(crate) fn forward_trace(&self, x_norm: f64, trace: &mut Vec<Vec<f64>>) {
        trace.resize_with(self.layers.len() + 1, Vec::new);
        trace[0].clear();
        trace[0].push(x_norm);
        for (k, layer) in self.layers.iter().enumerate() {
            let (head, tail) = trace.split_at_mut(k + 1);
            let out = &mut tail[0];
            layer.affine_into(&head[k], out);
            if let Some(act) = self.spec.activations.get(k) {
                for v in out.iter_mut() {
                    *v = act.apply(*v);
                }
            }
        }
    }

    /// Network output in normalized target units.
    pub fn forward_normalized(&self, x_norm: f64) -> [f64; OUTPUTS] {
        let mut trace = Vec::new();
        self.forward_trace(x_norm, &mut trace);
        let out = trace.last().expect("at least one layer");
        [out[0], out[1]]
    }

    /// Predicted `(τ, ξ)` for fractional order `alpha`.
    pub fn forward(&self, alpha: f64) -> Prediction {
        let y = self.forward_normalized(self.input_map.forward(alpha));
        Prediction {
            tau: self.output_maps[0].inverse(y[0]),
            xi: self.output_maps[1].inverse(y[1]),
            extrapolated: alpha < self.input_map.min || alpha > self.input_map.max,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("weights serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, NeuralError> {
        let w: NetworkWeights =
            serde_json::from_str(text).map_err(|e| NeuralError::Corrupt(e.to_string()))?;
        w.validate()?;
        Ok(w)
    }

    pub fn save(&self, path: &Path) -> Result<(), NeuralError> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, NeuralError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// `forward` over a grid, in input order.
pub fn predict_table(w: &NetworkWeights, alphas: &[f64]) -> Vec<(f64, Prediction)> {
    alphas.iter().map(|&a| (a, w.forward(a))).collect()
}

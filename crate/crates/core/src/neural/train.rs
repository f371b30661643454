use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::dataset::Dataset;
use super::network::{Activation, NetworkSpec, NetworkWeights, TrainingMeta, OUTPUTS};
use super::NeuralError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitScheme {
    /// Every weight and bias uniform in [−0.5, 0.5] / √fan-in.
    ScaledUniform,
    /// Nguyen–Widrow: hidden units spread evenly over the input interval,
    /// output layer uniform in [−1, 1].
    NguyenWidrow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataDivision {
    /// Fit every sample.
    FullBatch,
    /// Random train/validation/test split per run; training stops after
    /// `max_fail` consecutive epochs without validation improvement and
    /// returns the best-validation weights.
    Holdout {
        validation: usize,
        test: usize,
        max_fail: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainOptions {
    pub max_epochs: usize,
    pub init: InitScheme,
    pub division: DataDivision,
    pub lambda_initial: f64,
    pub lambda_factor: f64,
    pub lambda_max: f64,
    pub mse_goal: f64,
}

impl Default for TrainOptions {
    fn default() -> Self {
        Self {
            max_epochs: 200,
            init: InitScheme::ScaledUniform,
            division: DataDivision::FullBatch,
            lambda_initial: 1e-3,
            lambda_factor: 10.0,
            lambda_max: 1e10,
            mse_goal: 1e-10,
        }
    }
}

impl TrainOptions {
    /// Nguyen–Widrow start and a 1/1 validation/test holdout with six
    /// allowed validation failures.
    pub fn holdout() -> Self {
        Self {
            init: InitScheme::NguyenWidrow,
            division: DataDivision::Holdout {
                validation: 1,
                test: 1,
                max_fail: 6,
            },
            ..Self::default()
        }
    }

    pub fn with_max_epochs(mut self, max_epochs: usize) -> Self {
        self.max_epochs = max_epochs;
        self
    }

    pub fn validate(&self) -> Result<(), NeuralError> {
        let bad = |m: &str| Err(NeuralError::InvalidOptions(m.to_string()));
        if !(self.lambda_initial > 0.0 && self.lambda_initial.is_finite()) {
            return bad("lambda_initial must be positive");
        }
        if !(self.lambda_factor > 1.0 && self.lambda_factor.is_finite()) {
            return bad("lambda_factor must exceed 1");
        }
        if !(self.lambda_max >= self.lambda_initial) {
            return bad("lambda_max must be at least lambda_initial");
        }
        if !(self.mse_goal >= 0.0) {
            return bad("mse_goal must be non-negative");
        }
        if let DataDivision::Holdout { max_fail, .. } = self.division {
            if max_fail == 0 {
                return bad("max_fail must be at least 1");
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    MaxEpochs,
    LambdaLimit,
    Goal,
    ValidationStop,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub weights: NetworkWeights,
    /// MSE over every sample of the dataset on normalized targets.
    pub final_mse: f64,
    pub epochs: usize,
    /// Training-subset MSE after initialization and after each accepted step.
    pub history: Vec<f64>,
    pub stop: StopReason,
}

/// Normalized samples: inputs and row-major `[τ, ξ]` targets.
struct Normalized {
    x: Vec<f64>,
    t: Vec<[f64; OUTPUTS]>,
}

fn normalize(w: &NetworkWeights, data: &Dataset) -> Normalized {
    let x = data.rows().iter().map(|r| w.input_map.forward(r.alpha)).collect();
    let t = data
        .rows()
        .iter()
        .map(|r| [w.output_maps[0].forward(r.tau), w.output_maps[1].forward(r.xi)])
        .collect();
    Normalized { x, t }
}

fn residuals(w: &NetworkWeights, n: &Normalized, idx: &[usize], out: &mut Vec<f64>) {
    out.clear();
    for &i in idx {
        let y = w.forward_normalized(n.x[i]);
        for k in 0..OUTPUTS {
            out.push(n.t[i][k] - y[k]);
        }
    }
}

fn mean_square(e: &[f64]) -> f64 {
    if e.is_empty() {
        return 0.0;
    }
    e.iter().map(|v| v * v).sum::<f64>() / e.len() as f64
}

fn subset_mse(w: &NetworkWeights, n: &Normalized, idx: &[usize]) -> f64 {
    let mut e = Vec::new();
    residuals(w, n, idx, &mut e);
    mean_square(&e)
}

/// MSE of `w` on every sample of `data`, in normalized target units.
pub fn mse_all(w: &NetworkWeights, data: &Dataset) -> f64 {
    let n = normalize(w, data);
    let idx: Vec<usize> = (0..data.len()).collect();
    subset_mse(w, &n, &idx)
}

/// Jacobian of the network outputs with respect to the flat parameter vector,
/// by reverse-mode differentiation.
///
/// Rows are ordered `(sample, output)`; columns follow
/// [`NetworkWeights::params`].
pub fn jacobian(w: &NetworkWeights, x_norm: &[f64]) -> DMatrix<f64> {
    let n_params = w.spec.parameter_count();
    let mut jac = DMatrix::zeros(x_norm.len() * OUTPUTS, n_params);
    let offsets: Vec<usize> = w
        .layers
        .iter()
        .scan(0, |acc, l| {
            let start = *acc;
            *acc += l.weights.len() + l.biases.len();
            Some(start)
        })
        .collect();
    let last = w.layers.len() - 1;
    let mut trace = Vec::new();
    let mut delta = Vec::new();
    let mut next = Vec::new();
    for (s, &x) in x_norm.iter().enumerate() {
        w.forward_trace(x, &mut trace);
        for k in 0..OUTPUTS {
            let row = s * OUTPUTS + k;
            delta.clear();
            delta.extend((0..OUTPUTS).map(|r| if r == k { 1.0 } else { 0.0 }));
            for l in (0..=last).rev() {
                let layer = &w.layers[l];
                let input = &trace[l];
                let base = offsets[l];
                for (r, &d) in delta.iter().enumerate() {
                    if d == 0.0 {
                        continue;
                    }
                    for (c, &a) in input.iter().enumerate() {
                        jac[(row, base + r * layer.cols + c)] = d * a;
                    }
                    jac[(row, base + layer.weights.len() + r)] = d;
                }
                if l == 0 {
                    break;
                }
                let act = w.spec.activations[l - 1];
                next.clear();
                for c in 0..layer.cols {
                    let back: f64 = delta
                        .iter()
                        .enumerate()
                        .map(|(r, d)| d * layer.weight(r, c))
                        .sum();
                    next.push(back * act.derivative_from_output(input[c]));
                }
                std::mem::swap(&mut delta, &mut next);
            }
        }
    }
    jac
}

/// Fresh weights for `spec` drawn from `rng`.
pub fn initialize<R: Rng>(
    spec: &NetworkSpec,
    data: &Dataset,
    scheme: InitScheme,
    rng: &mut R,
) -> Result<NetworkWeights, NeuralError> {
    let mut w = NetworkWeights::zeroed(spec.clone(), data.output_maps())?;
    match scheme {
        InitScheme::ScaledUniform => {
            for l in &mut w.layers {
                let scale = 1.0 / (l.cols as f64).sqrt();
                for v in l.weights.iter_mut().chain(l.biases.iter_mut()) {
                    *v = rng.gen_range(-0.5..=0.5) * scale;
                }
            }
        }
        InitScheme::NguyenWidrow => {
            let n_hidden = spec.hidden_layers;
            for k in 0..n_hidden {
                let input_range = if k == 0 {
                    (-1.0, 1.0)
                } else {
                    spec.activations[k - 1].output_range()
                };
                nguyen_widrow_layer(&mut w.layers[k], spec.activations[k], input_range, rng);
            }
            let out = &mut w.layers[n_hidden];
            for v in out.weights.iter_mut().chain(out.biases.iter_mut()) {
                *v = rng.gen_range(-1.0..=1.0);
            }
        }
    }
    Ok(w)
}

fn nguyen_widrow_layer<R: Rng>(
    layer: &mut super::network::Layer,
    act: Activation,
    input_range: (f64, f64),
    rng: &mut R,
) {
    let (s, r) = (layer.rows, layer.cols);
    let magnitude = 0.7 * (s as f64).powf(1.0 / r as f64);
    for row in 0..s {
        let w = &mut layer.weights[row * r..(row + 1) * r];
        for v in w.iter_mut() {
            *v = rng.gen_range(-1.0..=1.0);
        }
        let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
        for v in w.iter_mut() {
            *v = if norm > 0.0 { magnitude * *v / norm } else { magnitude / (r as f64).sqrt() };
        }
        layer.biases[row] = if s == 1 {
            0.0
        } else {
            let spread = -1.0 + 2.0 * row as f64 / (s - 1) as f64;
            magnitude * spread * w[0].signum()
        };
    }
    let (n1, n2) = act.active_range();
    let (half, mid) = (0.5 * (n2 - n1), 0.5 * (n2 + n1));
    let xs = 2.0 / (input_range.1 - input_range.0);
    let ys = 1.0 - input_range.1 * xs;
    for row in 0..s {
        let w = &mut layer.weights[row * r..(row + 1) * r];
        let mut b = half * layer.biases[row] + mid;
        for v in w.iter_mut() {
            *v *= half;
            b += *v * ys;
            *v *= xs;
        }
        layer.biases[row] = b;
    }
}

/// Trains `spec` on `data`; all randomness comes from `seed`.
pub fn train(
    spec: &NetworkSpec,
    data: &Dataset,
    seed: u64,
    opts: &TrainOptions,
) -> Result<TrainOutcome, NeuralError> {
    spec.validate()?;
    opts.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = initialize(spec, data, opts.init, &mut rng)?;
    let norm = normalize(&w, data);
    let all: Vec<usize> = (0..data.len()).collect();

    let (train_idx, val_idx, max_fail) = match opts.division {
        DataDivision::FullBatch => (all.clone(), Vec::new(), usize::MAX),
        DataDivision::Holdout {
            validation,
            test,
            max_fail,
        } => {
            if validation + test >= data.len() {
                return Err(NeuralError::InvalidOptions(format!(
                    "holdout of {} leaves no training samples out of {}",
                    validation + test,
                    data.len()
                )));
            }
            let mut perm = all.clone();
            perm.shuffle(&mut rng);
            let val = perm[..validation].to_vec();
            let mut tr = perm[validation + test..].to_vec();
            tr.sort_unstable();
            (tr, val, max_fail)
        }
    };
    let x_train: Vec<f64> = train_idx.iter().map(|&i| norm.x[i]).collect();

    let mut params = w.params();
    let mut e = Vec::new();
    residuals(&w, &norm, &train_idx, &mut e);
    let mut mse = mean_square(&e);
    let mut history = vec![mse];
    let mut lambda = opts.lambda_initial;

    let mut best_val = subset_mse(&w, &norm, &val_idx);
    let mut best_params = params.clone();
    let mut fails = 0usize;

    let mut trial = w.clone();
    let mut trial_e = Vec::new();
    let mut epochs = 0;
    let mut stop = StopReason::MaxEpochs;

    while epochs < opts.max_epochs {
        if mse < opts.mse_goal {
            stop = StopReason::Goal;
            break;
        }
        let jac = jacobian(&w, &x_train);
        if jac.iter().any(|v| !v.is_finite()) {
            return Err(NeuralError::NonFinite(format!(
                "non-finite Jacobian at epoch {epochs} (seed {seed}, {})",
                spec.describe()
            )));
        }
        let jjt = &jac * jac.transpose();
        let ev = DVector::from_column_slice(&e);
        let mut accepted = false;
        while lambda <= opts.lambda_max {
            let mut system = jjt.clone();
            for i in 0..system.nrows() {
                system[(i, i)] += lambda;
            }
            // Δ = Jᵀ(JJᵀ + λI)⁻¹e equals (JᵀJ + λI)⁻¹Jᵀe and needs only an
            // m×m solve for m residuals.
            let step = system
                .cholesky()
                .map(|c| jac.transpose() * c.solve(&ev));
            if let Some(step) = step.filter(|s| s.iter().all(|v| v.is_finite())) {
                let candidate: Vec<f64> = params.iter().zip(step.iter()).map(|(p, d)| p + d).collect();
                trial.set_params(&candidate);
                residuals(&trial, &norm, &train_idx, &mut trial_e);
                let trial_mse = mean_square(&trial_e);
                if trial_mse < mse {
                    params = candidate;
                    std::mem::swap(&mut w, &mut trial);
                    std::mem::swap(&mut e, &mut trial_e);
                    mse = trial_mse;
                    history.push(mse);
                    lambda /= opts.lambda_factor;
                    accepted = true;
                    break;
                }
            }
            lambda *= opts.lambda_factor;
        }
        epochs += 1;
        if !accepted {
            stop = StopReason::LambdaLimit;
            break;
        }
        if !val_idx.is_empty() {
            let v = subset_mse(&w, &norm, &val_idx);
            if v < best_val {
                best_val = v;
                best_params.clone_from(&params);
                fails = 0;
            } else if v > best_val {
                fails += 1;
                if fails >= max_fail {
                    stop = StopReason::ValidationStop;
                    break;
                }
            }
        }
    }
    if stop == StopReason::MaxEpochs && mse < opts.mse_goal {
        stop = StopReason::Goal;
    }
    if !val_idx.is_empty() {
        w.set_params(&best_params);
    }
    let final_mse = subset_mse(&w, &norm, &all);
    w.training = TrainingMeta {
        seed,
        final_mse: Some(final_mse),
        epochs,
    };
    Ok(TrainOutcome {
        weights: w,
        final_mse,
        epochs,
        history,
        stop,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fosystems::SystemClass;
    use crate::neural::DataRow;

    fn constant_data() -> Dataset {
        let rows = (0..9)
            .map(|i| DataRow {
                alpha: 1.1 + 0.1 * i as f64,
                tau: 0.5,
                xi: 0.5,
            })
            .collect();
        Dataset::new("constant", rows).unwrap()
    }

    #[test]
    fn constant_targets_fit_quickly() {
        let spec = NetworkSpec::new(5, vec![Activation::Logsig]).unwrap();
        let out = train(&spec, &constant_data(), 3, &TrainOptions::default().with_max_epochs(50)).unwrap();
        assert!(out.final_mse < 1e-8, "{}", out.final_mse);
    }

    #[test]
    fn zero_epochs_returns_initial_mse() {
        let spec = NetworkSpec::new(10, vec![Activation::Tansig]).unwrap();
        let data = Dataset::builtin(SystemClass::Pseudo);
        let out = train(&spec, &data, 9, &TrainOptions::default().with_max_epochs(0)).unwrap();
        assert_eq!(out.epochs, 0);
        assert_eq!(out.history.len(), 1);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let w0 = initialize(&spec, &data, InitScheme::ScaledUniform, &mut rng).unwrap();
        assert_eq!(out.weights.params(), w0.params());
        assert_eq!(out.final_mse, mse_all(&w0, &data));
    }

    #[test]
    fn accepted_steps_strictly_decrease() {
        let data = Dataset::builtin(SystemClass::MetaLead1);
        for spec in NetworkSpec::sweep_grid().into_iter().step_by(7) {
            let out = train(&spec, &data, 11, &TrainOptions::default()).unwrap();
            assert!(out.history.windows(2).all(|p| p[1] < p[0]), "{}", spec.describe());
        }
    }

    #[test]
    fn nguyen_widrow_spreads_first_layer() {
        let spec = NetworkSpec::new(5, vec![Activation::Tansig]).unwrap();
        let data = Dataset::builtin(SystemClass::Pseudo);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let w = initialize(&spec, &data, InitScheme::NguyenWidrow, &mut rng).unwrap();
        // |w| = 0.7·S scaled to the tansig active range [−2, 2].
        for &v in &w.layers[0].weights {
            assert!((v.abs() - 7.0).abs() < 1e-12);
        }
        let mut b: Vec<f64> = w.layers[0].biases.iter().map(|v| v.abs()).collect();
        b.sort_by(f64::total_cmp);
        assert!((b[4] - 7.0).abs() < 1e-12 && b[0].abs() < 1e-12);
    }

    #[test]
    fn holdout_rejects_oversized_split() {
        let spec = NetworkSpec::new(5, vec![Activation::Tansig]).unwrap();
        let mut opts = TrainOptions::holdout();
        opts.division = DataDivision::Holdout {
            validation: 5,
            test: 4,
            max_fail: 6,
        };
        assert!(train(&spec, &Dataset::builtin(SystemClass::Pseudo), 0, &opts).is_err());
    }

    #[test]
    fn invalid_options() {
        let mut o = TrainOptions::default();
        o.lambda_factor = 1.0;
        assert!(o.validate().is_err());
        let mut o = TrainOptions::default();
        o.lambda_initial = 0.0;
        assert!(o.validate().is_err());
    }
}

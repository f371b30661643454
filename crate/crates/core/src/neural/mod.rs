//! Feed-forward predictor of second-order parameters (τ, ξ) from α.
//!
//! Networks have one input, one or two equal-width sigmoid hidden layers and
//! two linear outputs. Training is damped least squares (Levenberg–Marquardt)
//! on normalized targets.

mod dataset;
mod network;
mod sweep;
mod train;

pub use dataset::{DataRow, Dataset};
pub use network::{
    predict_table, Activation, AffineMap, Layer, NetworkSpec, NetworkWeights, Prediction,
    TrainingMeta, ALPHA_RANGE, FORMAT_VERSION, INPUTS, NEURON_CHOICES, OUTPUTS,
};
pub use sweep::{run_seed, sweep, sweep_specs, TrainingReport};
pub use train::{
    initialize, jacobian, mse_all, train, DataDivision, InitScheme, StopReason, TrainOptions,
    TrainOutcome,
};

#[derive(Debug, thiserror::Error)]
pub enum NeuralError {
    #[error("invalid network spec: {0}")]
    InvalidSpec(String),
    #[error("invalid dataset: {0}")]
    InvalidData(String),
    #[error("invalid training options: {0}")]
    InvalidOptions(String),
    #[error("corrupt model: {0}")]
    Corrupt(String),
    #[error("training diverged: {0}")]
    NonFinite(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

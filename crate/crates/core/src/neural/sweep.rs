use rayon::prelude::*;

use super::dataset::Dataset;
use super::network::{NetworkSpec, NetworkWeights};
use super::train::{train, TrainOptions};
use super::NeuralError;

/// Statistics of repeated independent training runs of one architecture.
#[derive(Debug, Clone)]
pub struct TrainingReport {
    pub spec: NetworkSpec,
    pub runs: usize,
    /// Final MSE of each successful run, in run order.
    pub per_run_mse: Vec<f64>,
    pub avg_mse: f64,
    pub min_mse: f64,
    /// Population standard deviation of `per_run_mse`.
    pub std_mse: f64,
    pub failed_runs: usize,
    pub best_weights: Option<NetworkWeights>,
}

impl TrainingReport {
    fn from_runs(spec: NetworkSpec, outcomes: Vec<Result<(f64, NetworkWeights), NeuralError>>) -> Self {
        let runs = outcomes.len();
        let mut per_run_mse = Vec::with_capacity(runs);
        let mut best: Option<(f64, NetworkWeights)> = None;
        let mut failed_runs = 0;
        for o in outcomes {
            match o {
                Ok((mse, w)) if mse.is_finite() => {
                    per_run_mse.push(mse);
                    if best.as_ref().map_or(true, |(b, _)| mse < *b) {
                        best = Some((mse, w));
                    }
                }
                _ => failed_runs += 1,
            }
        }
        let n = per_run_mse.len() as f64;
        let (avg_mse, min_mse, std_mse) = if per_run_mse.is_empty() {
            (f64::NAN, f64::NAN, f64::NAN)
        } else {
            let avg = per_run_mse.iter().sum::<f64>() / n;
            let min = per_run_mse.iter().copied().fold(f64::INFINITY, f64::min);
            let var = per_run_mse.iter().map(|m| (m - avg).powi(2)).sum::<f64>() / n;
            (avg, min, var.sqrt())
        };
        Self {
            spec,
            runs,
            per_run_mse,
            avg_mse,
            min_mse,
            std_mse,
            failed_runs,
            best_weights: best.map(|(_, w)| w),
        }
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of run `run` of configuration `config`; nearby base seeds give
/// unrelated run seeds.
pub fn run_seed(base: u64, config: usize, run: usize) -> u64 {
    splitmix64(splitmix64(base) ^ (((config as u64) << 32) | run as u64))
}

/// [`sweep_specs`] over the full 30-architecture grid.
pub fn sweep(
    data: &Dataset,
    runs: usize,
    seed: u64,
    opts: &TrainOptions,
) -> Result<Vec<TrainingReport>, NeuralError> {
    sweep_specs(&NetworkSpec::sweep_grid(), data, runs, seed, opts)
}

/// Trains every spec `runs` times; config `i` uses seeds `run_seed(seed, i, r)`.
pub fn sweep_specs(
    specs: &[NetworkSpec],
    data: &Dataset,
    runs: usize,
    seed: u64,
    opts: &TrainOptions,
) -> Result<Vec<TrainingReport>, NeuralError> {
    if runs == 0 {
        return Err(NeuralError::InvalidOptions("runs must be at least 1".into()));
    }
    opts.validate()?;
    let jobs: Vec<(usize, usize)> = (0..specs.len())
        .flat_map(|c| (0..runs).map(move |r| (c, r)))
        .collect();
    let mut results: Vec<_> = jobs
        .par_iter()
        .map(|&(c, r)| {
            train(&specs[c], data, run_seed(seed, c, r), opts).map(|o| (o.final_mse, o.weights))
        })
        .collect();
    let mut reports = Vec::with_capacity(specs.len());
    for (c, spec) in specs.iter().enumerate().rev() {
        let tail = results.split_off(c * runs);
        reports.push(TrainingReport::from_runs(spec.clone(), tail));
    }
    reports.reverse();
    Ok(reports)
}

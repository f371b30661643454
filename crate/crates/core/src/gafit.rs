//! Real-coded genetic algorithm and the second-order fits built on it.
//!
//! Each generation keeps one elite, fills the rest of the population with
//! children of size-2 tournament winners (BLX-0.5 blend crossover with
//! probability `crossover_fraction`, otherwise a copy of the first parent),
//! then perturbs each gene with probability `mutation_fraction` by Gaussian
//! noise of 5% of that gene's bound width. Children are clamped into bounds.
//!
//! Fitness evaluation runs in parallel, but every random draw happens on the
//! generation loop's single seeded stream, so results are bit-identical across
//! thread counts.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fosystems::{
    fo_response, Excitation, FoError, FractionalSystem, Horizon, SystemClass, TimeGrid,
};
use crate::numfmt::csv_num;
use crate::refmodel::{error_index, FitCriterion, RefModelError, SecondOrderParams};

const BLX_ALPHA: f64 = 0.5;
const MUTATION_SIGMA_FRACTION: f64 = 0.05;
const TOURNAMENT_SIZE: usize = 2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GaError {
    #[error("invalid GA configuration: {0}")]
    InvalidConfig(String),
    #[error("fractional-order step response is unreliable after {reliable_up_to} s of the {horizon} s fitting horizon")]
    UnreliableResponse { reliable_up_to: f64, horizon: f64 },
    #[error(transparent)]
    System(#[from] FoError),
    #[error(transparent)]
    Model(#[from] RefModelError),
}

/// Axis-aligned search box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self, GaError> {
        let b = Self { lower, upper };
        b.validate()?;
        Ok(b)
    }

    /// τ ∈ [0.05, 3], ξ ∈ [0.01, 2].
    pub fn default_tau_xi() -> Self {
        Self {
            lower: vec![0.05, 0.01],
            upper: vec![3.0, 2.0],
        }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| *v >= *lo && *v <= *hi)
    }

    fn validate(&self) -> Result<(), GaError> {
        if self.lower.is_empty() || self.lower.len() != self.upper.len() {
            return Err(GaError::InvalidConfig(format!(
                "bounds need matching non-empty lower/upper, got {} and {}",
                self.lower.len(),
                self.upper.len()
            )));
        }
        for (i, (lo, hi)) in self.lower.iter().zip(&self.upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(GaError::InvalidConfig(format!(
                    "bound {i} is degenerate or infinite: [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaConfig {
    pub population: usize,
    pub crossover_fraction: f64,
    pub mutation_fraction: f64,
    pub max_generations: usize,
    /// Stop when the best value improves by less than this over `stall_generations`.
    pub stall_tolerance: f64,
    pub stall_generations: usize,
    pub bounds: Bounds,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        Self {
            population: 20,
            crossover_fraction: 0.8,
            mutation_fraction: 0.2,
            max_generations: 150,
            stall_tolerance: 1e-8,
            stall_generations: 30,
            bounds: Bounds::default_tau_xi(),
            seed: 42,
        }
    }
}

impl GaConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), GaError> {
        if self.population < 4 {
            return Err(GaError::InvalidConfig(format!(
                "population {} must be at least 4",
                self.population
            )));
        }
        for (name, v) in [
            ("crossover_fraction", self.crossover_fraction),
            ("mutation_fraction", self.mutation_fraction),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(GaError::InvalidConfig(format!("{name} = {v} outside [0, 1]")));
            }
        }
        if self.max_generations == 0 {
            return Err(GaError::InvalidConfig("max_generations must be >= 1".into()));
        }
        self.bounds.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaOutcome {
    pub best: Vec<f64>,
    pub best_value: f64,
    pub generations_used: usize,
    /// Best-so-far objective after each generation (index 0 is the initial population).
    pub history: Vec<f64>,
}

fn tournament<'a, R: Rng>(rng: &mut R, pop: &'a [Vec<f64>], fitness: &[f64]) -> &'a [f64] {
    let mut best = rng.gen_range(0..pop.len());
    for _ in 1..TOURNAMENT_SIZE {
        let c = rng.gen_range(0..pop.len());
        if fitness[c] < fitness[best] {
            best = c;
        }
    }
    &pop[best]
}

fn evaluate<F>(objective: &F, pop: &[Vec<f64>]) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    pop.par_iter()
        .map(|x| {
            let v = objective(x);
            if v.is_finite() {
                v
            } else {
                f64::INFINITY
            }
        })
        .collect()
}

fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = i;
        }
    }
    best
}

/// Minimizes `objective` over `bounds`.
///
/// Non-finite objective values are treated as the worst possible fitness.
/// Returns the best point ever evaluated; deterministic for a given seed.
pub fn ga_minimize<F>(objective: F, bounds: &Bounds, config: &GaConfig) -> Result<GaOutcome, GaError>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    config.validate()?;
    bounds.validate()?;
    let dim = bounds.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let sigmas: Vec<Normal<f64>> = bounds
        .lower
        .iter()
        .zip(&bounds.upper)
        .map(|(lo, hi)| Normal::new(0.0, MUTATION_SIGMA_FRACTION * (hi - lo)).expect("finite sigma"))
        .collect();

    let mut pop: Vec<Vec<f64>> = (0..config.population)
        .map(|_| {
            (0..dim)
                .map(|d| rng.gen_range(bounds.lower[d]..=bounds.upper[d]))
                .collect()
        })
        .collect();
    let mut fitness = evaluate(&objective, &pop);
    let i = argmin(&fitness);
    let mut best = pop[i].clone();
    let mut best_value = fitness[i];
    let mut history = vec![best_value];

    let mut generations = 0;
    while generations < config.max_generations {
        let elite = argmin(&fitness);
        let mut next = Vec::with_capacity(config.population);
        next.push(pop[elite].clone());
        while next.len() < config.population {
            let a = tournament(&mut rng, &pop, &fitness);
            let b = tournament(&mut rng, &pop, &fitness);
            let mut child: Vec<f64> = if rng.gen_bool(config.crossover_fraction) {
                a.iter()
                    .zip(b)
                    .map(|(&x, &y)| {
                        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
                        let span = hi - lo;
                        if span == 0.0 {
                            lo
                        } else {
                            rng.gen_range((lo - BLX_ALPHA * span)..=(hi + BLX_ALPHA * span))
                        }
                    })
                    .collect()
            } else {
                a.to_vec()
            };
            for (d, gene) in child.iter_mut().enumerate() {
                if rng.gen_bool(config.mutation_fraction) {
                    *gene += sigmas[d].sample(&mut rng);
                }
                *gene = gene.clamp(bounds.lower[d], bounds.upper[d]);
            }
            next.push(child);
        }
        pop = next;
        fitness = evaluate(&objective, &pop);
        generations += 1;

        let i = argmin(&fitness);
        if fitness[i] < best_value {
            best_value = fitness[i];
            best = pop[i].clone();
        }
        debug_assert!(best_value <= *history.last().expect("history starts non-empty"));
        history.push(best_value);

        if config.stall_generations > 0 && history.len() > config.stall_generations {
            let earlier = history[history.len() - 1 - config.stall_generations];
            if earlier - best_value < config.stall_tolerance {
                break;
            }
        }
    }

    Ok(GaOutcome {
        best,
        best_value,
        generations_used: generations,
        history,
    })
}

/// Optimal second-order equivalent of one fractional-order plant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub alpha: f64,
    pub class: SystemClass,
    pub criterion: FitCriterion,
    pub j_min: f64,
    pub tau: f64,
    pub xi: f64,
    pub generations_used: usize,
    pub horizon: f64,
}

impl FitResult {
    pub const CSV_HEADER: &'static str = "alpha,class,criterion,jmin,tau,xi,generations,horizon_s";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            csv_num(self.alpha),
            self.class.label(),
            self.criterion.label(),
            csv_num(self.j_min),
            csv_num(self.tau),
            csv_num(self.xi),
            self.generations_used,
            csv_num(self.horizon)
        )
    }
}

pub fn write_fit_csv<'a, W: Write>(
    mut out: W,
    rows: impl IntoIterator<Item = &'a FitResult>,
) -> io::Result<()> {
    writeln!(out, "{}", FitResult::CSV_HEADER)?;
    for r in rows {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}

/// Step response on the fitting grid, rejected if any sample is unreliable.
pub fn fitting_response(system: &FractionalSystem) -> Result<crate::fosystems::TimeSeries, GaError> {
    let grid = TimeGrid::fitting();
    let fo = fo_response(system, Excitation::Step, &grid, Horizon::Enforce)?;
    if !fo.fully_reliable() {
        return Err(GaError::UnreliableResponse {
            reliable_up_to: fo.reliable_up_to(),
            horizon: grid.t_max(),
        });
    }
    Ok(fo)
}

/// Fits `(τ, ξ)` to the step response of `system` under `criterion`.
pub fn fit_system(
    system: &FractionalSystem,
    criterion: FitCriterion,
    config: &GaConfig,
) -> Result<FitResult, GaError> {
    config.validate()?;
    if config.bounds.dim() != 2 || config.bounds.lower.iter().any(|v| *v <= 0.0) {
        return Err(GaError::InvalidConfig(
            "fitting needs 2-D (tau, xi) bounds with positive lower limits".into(),
        ));
    }
    let fo = fitting_response(system)?;
    let objective = |x: &[f64]| match SecondOrderParams::new(x[0], x[1]) {
        Ok(p) => error_index(&fo, &p, criterion).unwrap_or(f64::INFINITY),
        Err(_) => f64::INFINITY,
    };
    let outcome = ga_minimize(objective, &config.bounds, config)?;
    let (tau, xi) = (outcome.best[0], outcome.best[1]);
    let j_min = error_index(&fo, &SecondOrderParams::new(tau, xi)?, criterion)?;
    Ok(FitResult {
        alpha: system.alpha,
        class: system.class,
        criterion,
        j_min,
        tau,
        xi,
        generations_used: outcome.generations_used,
        horizon: fo.grid().t_max(),
    })
}

/// Seed used for row `index` of a table fit.
pub fn row_seed(base: u64, index: usize) -> u64 {
    base.wrapping_add(index as u64)
}

/// One fit per α; row `i` runs with seed `config.seed + i`.
///
/// Rows are independent: a failing row is reported in place and the others
/// still run.
pub fn fit_table(
    class: SystemClass,
    criterion: FitCriterion,
    alphas: &[f64],
    config: &GaConfig,
) -> Vec<Result<FitResult, GaError>> {
    alphas
        .par_iter()
        .enumerate()
        .map(|(i, &alpha)| {
            let system = FractionalSystem::new(class, alpha)?;
            fit_system(&system, criterion, &config.clone().with_seed(row_seed(config.seed, i)))
        })
        .collect()
}

/// α = 1.1, 1.2, …, 1.9.
pub fn default_alpha_grid() -> Vec<f64> {
    (1..=9).map(|k| 1.0 + k as f64 / 10.0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere(x: &[f64]) -> f64 {
        (x[0] - 0.7).powi(2) + (x[1] - 1.2).powi(2)
    }

    #[test]
    fn sphere_minimum_found() {
        let bounds = Bounds::new(vec![0.0, 0.0], vec![3.0, 3.0]).unwrap();
        let out = ga_minimize(sphere, &bounds, &GaConfig::default()).unwrap();
        assert!((out.best[0] - 0.7).abs() < 1e-3, "{:?}", out.best);
        assert!((out.best[1] - 1.2).abs() < 1e-3, "{:?}", out.best);
    }

    #[test]
    fn constant_objective() {
        let bounds = Bounds::new(vec![-1.0, 2.0], vec![1.0, 5.0]).unwrap();
        let out = ga_minimize(|_| 3.25, &bounds, &GaConfig::default()).unwrap();
        assert_eq!(out.best_value, 3.25);
        assert!(bounds.contains(&out.best));
    }

    #[test]
    fn non_finite_objective_is_worst_fitness() {
        let bounds = Bounds::new(vec![-1.0], vec![1.0]).unwrap();
        let out = ga_minimize(
            |x| if x[0] < 0.0 { f64::NAN } else { x[0] },
            &bounds,
            &GaConfig::default(),
        )
        .unwrap();
        assert!(out.best_value.is_finite());
        assert!(out.best[0] >= 0.0 && out.best[0] < 1e-2);
    }

    #[test]
    fn invalid_configs_rejected() {
        let cfg = GaConfig {
            population: 3,
            ..GaConfig::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = GaConfig {
            crossover_fraction: 1.5,
            ..GaConfig::default()
        };
        assert!(cfg.validate().is_err());
        assert!(Bounds::new(vec![1.0], vec![1.0]).is_err());
        assert!(Bounds::new(vec![0.0, 0.0], vec![1.0]).is_err());
        assert!(Bounds::new(vec![0.0], vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn stall_rule_stops_early() {
        let bounds = Bounds::new(vec![0.0], vec![1.0]).unwrap();
        let out = ga_minimize(|_| 1.0, &bounds, &GaConfig::default()).unwrap();
        assert_eq!(out.generations_used, 30);
    }

    #[test]
    fn default_grid() {
        let g = default_alpha_grid();
        assert_eq!(g.len(), 9);
        assert!((g[0] - 1.1).abs() < 1e-12 && (g[8] - 1.9).abs() < 1e-12);
    }

    #[test]
    fn csv_row_format() {
        let r = FitResult {
            alpha: 1.5,
            class: SystemClass::Pseudo,
            criterion: FitCriterion::Ise,
            j_min: 0.0429182,
            tau: 0.843211,
            xi: 0.37401,
            generations_used: 87,
            horizon: 25.0,
        };
        assert_eq!(r.csv_row(), "1.5,pseudo,ISE,0.0429182,0.843211,0.37401,87,25");
    }
}

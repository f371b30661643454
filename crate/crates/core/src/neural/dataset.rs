use std::path::Path;

use crate::fosystems::SystemClass;
use crate::refmodel::FitCriterion;
use crate::reference::fit_reference;

use super::network::AffineMap;
use super::NeuralError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DataRow {
    pub alpha: f64,
    pub tau: f64,
    pub xi: f64,
}

/// Training pairs α → (τ, ξ) with a free-form provenance label.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub label: String,
    rows: Vec<DataRow>,
}

impl Dataset {
    pub fn new(label: impl Into<String>, rows: Vec<DataRow>) -> Result<Self, NeuralError> {
        if rows.is_empty() {
            return Err(NeuralError::InvalidData("dataset is empty".into()));
        }
        for r in &rows {
            if !(r.alpha.is_finite() && r.tau.is_finite() && r.xi.is_finite())
                || r.alpha <= 0.0
                || r.tau <= 0.0
                || r.xi <= 0.0
            {
                return Err(NeuralError::InvalidData(format!(
                    "row ({}, {}, {}) must be finite and positive",
                    r.alpha, r.tau, r.xi
                )));
            }
        }
        if rows.windows(2).any(|w| w[1].alpha <= w[0].alpha) {
            return Err(NeuralError::InvalidData("alphas must be strictly increasing".into()));
        }
        Ok(Self {
            label: label.into(),
            rows,
        })
    }

    /// ITSE fits of one class from the bundled reference tables.
    pub fn builtin(class: SystemClass) -> Self {
        let rows = fit_reference(class, FitCriterion::Itse)
            .iter()
            .map(|r| DataRow {
                alpha: r.alpha,
                tau: r.tau,
                xi: r.xi,
            })
            .collect();
        Self::new(format!("{}-itse", class.label()), rows).expect("bundled table is valid")
    }

    /// Rows of a `fit-table` CSV matching `class` and `criterion`.
    pub fn from_fit_csv(
        path: &Path,
        class: SystemClass,
        criterion: FitCriterion,
    ) -> Result<Self, NeuralError> {
        let text = std::fs::read_to_string(path)?;
        Self::parse_fit_csv(&text, class, criterion)
            .map(|mut d| {
                d.label = format!("{}:{}-{}", path.display(), class.label(), criterion.label());
                d
            })
    }

    pub fn parse_fit_csv(
        text: &str,
        class: SystemClass,
        criterion: FitCriterion,
    ) -> Result<Self, NeuralError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#'));
        let header: Vec<&str> = lines
            .next()
            .ok_or_else(|| NeuralError::InvalidData("empty CSV".into()))?
            .split(',')
            .map(str::trim)
            .collect();
        let col = |name: &str| {
            header
                .iter()
                .position(|h| *h == name)
                .ok_or_else(|| NeuralError::InvalidData(format!("CSV lacks column {name:?}")))
        };
        let (ia, ic, ik, it, ix) = (col("alpha")?, col("class")?, col("criterion")?, col("tau")?, col("xi")?);
        let mut rows = Vec::new();
        for (n, line) in lines.enumerate() {
            let cells: Vec<&str> = line.split(',').map(str::trim).collect();
            let cell = |i: usize| {
                cells
                    .get(i)
                    .copied()
                    .ok_or_else(|| NeuralError::InvalidData(format!("row {} is short", n + 2)))
            };
            let row_class: SystemClass = cell(ic)?
                .parse()
                .map_err(|e| NeuralError::InvalidData(format!("row {}: {e}", n + 2)))?;
            let row_crit: FitCriterion = cell(ik)?
                .parse()
                .map_err(|e| NeuralError::InvalidData(format!("row {}: {e}", n + 2)))?;
            if row_class != class || row_crit != criterion {
                continue;
            }
            let num = |i: usize| -> Result<f64, NeuralError> {
                cell(i)?
                    .parse()
                    .map_err(|_| NeuralError::InvalidData(format!("row {}: bad number", n + 2)))
            };
            rows.push(DataRow {
                alpha: num(ia)?,
                tau: num(it)?,
                xi: num(ix)?,
            });
        }
        Self::new(format!("{}-{}", class.label(), criterion.label()), rows)
    }

    pub fn rows(&self) -> &[DataRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Per-target normalization maps over the dataset's range.
    pub fn output_maps(&self) -> [AffineMap; 2] {
        let range = |f: fn(&DataRow) -> f64| {
            let lo = self.rows.iter().map(f).fold(f64::INFINITY, f64::min);
            let hi = self.rows.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
            AffineMap::new(lo, hi)
        };
        [range(|r| r.tau), range(|r| r.xi)]
    }
}

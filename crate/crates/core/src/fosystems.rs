//! The three oscillatory fractional-order plant classes and their time
//! responses.
//!
//! | class       | transfer function              | leading order |
//! |-------------|--------------------------------|---------------|
//! | `Pseudo`    | `1 / (s^α + b)`                | α             |
//! | `MetaLead1` | `1 / (s^α + b)^{1/α}`          | 1             |
//! | `MetaLead2` | `1 / (s^α + b)^{2/α}`          | 2             |
//!
//! Responses come from the R-function series (pseudo) or the G-function
//! series (meta classes) with the pole parameter `a = −b`.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numfmt::csv_num;
use crate::specfun::{self, SeriesQuery, SpecfunError};

/// Longest trusted simulation horizon for the pseudo and first-order meta classes.
pub const HORIZON_LONG: f64 = 30.0;
/// Longest trusted simulation horizon for the second-order meta class.
pub const HORIZON_META2: f64 = 25.0;
/// Sampling interval used by every fitting workflow.
pub const DEFAULT_DT: f64 = 0.01;
/// Fitting horizon in seconds.
pub const FIT_HORIZON: f64 = 25.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FoError {
    #[error("fractional order alpha = {0} must lie strictly inside (1, 2)")]
    OrderOutOfRange(f64),
    #[error("pole coefficient b = {0} must be finite and > 0")]
    InvalidPole(f64),
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
    #[error("t_max = {t_max} s exceeds the {limit} s reliable horizon of the {class} class; pass an explicit override to simulate further")]
    HorizonExceeded {
        class: SystemClass,
        t_max: f64,
        limit: f64,
    },
    #[error("unknown system class {0:?} (expected pseudo, meta1 or meta2)")]
    UnknownClass(String),
    #[error(transparent)]
    Special(#[from] SpecfunError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SystemClass {
    /// `1/(s^α + 1)`: damping from lowering the leading order.
    Pseudo,
    /// `1/(s^α + 1)^{1/α}`: meta-damping with leading order one.
    MetaLead1,
    /// `1/(s^α + 1)^{2/α}`: meta-damping with leading order two.
    MetaLead2,
}

impl SystemClass {
    pub const ALL: [SystemClass; 3] = [
        SystemClass::Pseudo,
        SystemClass::MetaLead1,
        SystemClass::MetaLead2,
    ];

    pub fn label(self) -> &'static str {
        match self {
            SystemClass::Pseudo => "pseudo",
            SystemClass::MetaLead1 => "meta1",
            SystemClass::MetaLead2 => "meta2",
        }
    }

    pub fn reliable_horizon(self) -> f64 {
        match self {
            SystemClass::Pseudo | SystemClass::MetaLead1 => HORIZON_LONG,
            SystemClass::MetaLead2 => HORIZON_META2,
        }
    }
}

impl fmt::Display for SystemClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for SystemClass {
    type Err = FoError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "pseudo" => Ok(SystemClass::Pseudo),
            "meta1" | "metalead1" => Ok(SystemClass::MetaLead1),
            "meta2" | "metalead2" => Ok(SystemClass::MetaLead2),
            _ => Err(FoError::UnknownClass(s.to_string())),
        }
    }
}

/// One plant from the three classes, with base order α ∈ (1, 2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FractionalSystem {
    pub class: SystemClass,
    pub alpha: f64,
    pub b: f64,
}

impl FractionalSystem {
    /// Frequency-normalized plant (`b = 1`).
    pub fn new(class: SystemClass, alpha: f64) -> Result<Self, FoError> {
        Self::with_pole(class, alpha, 1.0)
    }

    pub fn with_pole(class: SystemClass, alpha: f64, b: f64) -> Result<Self, FoError> {
        if !(alpha > 1.0 && alpha < 2.0) {
            return Err(FoError::OrderOutOfRange(alpha));
        }
        if !(b > 0.0 && b.is_finite()) {
            return Err(FoError::InvalidPole(b));
        }
        Ok(Self { class, alpha, b })
    }

    /// Exponent `r` of `(s^α + b)^r`; `None` for the pseudo class.
    pub fn multiplicity(&self) -> Option<f64> {
        match self.class {
            SystemClass::Pseudo => None,
            SystemClass::MetaLead1 => Some(1.0 / self.alpha),
            SystemClass::MetaLead2 => Some(2.0 / self.alpha),
        }
    }

    /// Highest power of `s` in the denominator, `r·α`.
    pub fn leading_order(&self) -> f64 {
        match self.class {
            SystemClass::Pseudo => self.alpha,
            SystemClass::MetaLead1 => 1.0,
            SystemClass::MetaLead2 => 2.0,
        }
    }

    fn query(&self, nu: f64, t: f64) -> SeriesQuery {
        let a = -self.b;
        match self.multiplicity() {
            None => SeriesQuery::r_function(self.alpha, nu, a, t),
            Some(r) => SeriesQuery::g_function(self.alpha, r, nu, a, t),
        }
    }

    /// Response at a single t > 0 with its series diagnostics.
    pub fn evaluate(
        &self,
        excitation: Excitation,
        t: f64,
    ) -> Result<specfun::SeriesResult, SpecfunError> {
        let q = self.query(excitation.nu(), t);
        match q.r {
            None => specfun::r_series(&q),
            Some(_) => specfun::g_series(&q),
        }
    }

    /// Analytic value at t = 0.
    pub fn initial_value(&self, excitation: Excitation) -> f64 {
        match excitation {
            Excitation::Step => 0.0,
            // Leading impulse term is t^{rα−1}/Γ(rα): 1 for rα = 1, 0 above.
            Excitation::Impulse => {
                if (self.leading_order() - 1.0).abs() < 1e-12 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Excitation {
    Step,
    Impulse,
}

impl Excitation {
    /// Laplace numerator power: `Y(s) = G(s)/s` for a step, `G(s)` for an impulse.
    pub fn nu(self) -> f64 {
        match self {
            Excitation::Step => -1.0,
            Excitation::Impulse => 0.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Excitation::Step => "step",
            Excitation::Impulse => "impulse",
        }
    }
}

impl FromStr for Excitation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "step" => Ok(Excitation::Step),
            "impulse" => Ok(Excitation::Impulse),
            _ => Err(format!("unknown excitation {s:?} (expected step or impulse)")),
        }
    }
}

/// Uniform grid `t_i = i·dt`, `i = 0..samples`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    dt: f64,
    t_max: f64,
}

impl TimeGrid {
    pub fn new(dt: f64, t_max: f64) -> Result<Self, FoError> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(FoError::InvalidGrid(format!("dt = {dt} must be > 0")));
        }
        if !(t_max > 0.0 && t_max.is_finite()) {
            return Err(FoError::InvalidGrid(format!("t_max = {t_max} must be > 0")));
        }
        if t_max < dt {
            return Err(FoError::InvalidGrid(format!(
                "t_max = {t_max} is shorter than dt = {dt}"
            )));
        }
        Ok(Self { dt, t_max })
    }

    /// The 0.01 s / 25 s grid every fit runs on.
    pub fn fitting() -> Self {
        Self {
            dt: DEFAULT_DT,
            t_max: FIT_HORIZON,
        }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn samples(&self) -> usize {
        (self.t_max / self.dt + 1e-9).floor() as usize + 1
    }

    pub fn time(&self, i: usize) -> f64 {
        i as f64 * self.dt
    }

    pub fn times(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.samples()).map(move |i| self.time(i))
    }
}

/// Whether [`fo_response`] may go past the class's reliable horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Horizon {
    Enforce,
    /// Caller acknowledges samples past the horizon may be flagged unreliable.
    Override,
}

/// A sampled response together with how far it can be trusted.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    grid: TimeGrid,
    values: Vec<f64>,
    reliable_up_to: f64,
}

impl TimeSeries {
    /// Wraps already-sampled values; every sample is taken as reliable.
    pub fn from_samples(grid: TimeGrid, values: Vec<f64>) -> Result<Self, FoError> {
        if values.len() != grid.samples() {
            return Err(FoError::InvalidGrid(format!(
                "{} values for a grid of {} samples",
                values.len(),
                grid.samples()
            )));
        }
        let reliable_up_to = grid.time(grid.samples() - 1);
        Ok(Self {
            grid,
            values,
            reliable_up_to,
        })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn reliable_up_to(&self) -> f64 {
        self.reliable_up_to
    }

    /// True when every sample on the grid passed the series diagnostics.
    pub fn fully_reliable(&self) -> bool {
        self.reliable_up_to >= self.grid.time(self.grid.samples() - 1)
    }

    /// `t,y` CSV with a trailing `# reliable_up_to=` comment.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "t,y")?;
        for (t, y) in self.grid.times().zip(&self.values) {
            writeln!(out, "{},{}", csv_num(t), csv_num(*y))?;
        }
        writeln!(out, "# reliable_up_to={}", csv_num(self.reliable_up_to))
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }
}

/// Step or impulse response of `system` sampled on `grid`.
///
/// The t = 0 sample is set analytically; every other sample is one series
/// evaluation. `reliable_up_to` is the last time before the first sample whose
/// series was flagged unreliable.
pub fn fo_response(
    system: &FractionalSystem,
    excitation: Excitation,
    grid: &TimeGrid,
    horizon: Horizon,
) -> Result<TimeSeries, FoError> {
    let limit = system.class.reliable_horizon();
    if horizon == Horizon::Enforce && grid.t_max() > limit + 1e-9 {
        return Err(FoError::HorizonExceeded {
            class: system.class,
            t_max: grid.t_max(),
            limit,
        });
    }
    let n = grid.samples();
    let evaluated: Vec<(f64, bool)> = (1..n)
        .into_par_iter()
        .map(|i| {
            system
                .evaluate(excitation, grid.time(i))
                .map(|res| (res.value, res.reliable))
        })
        .collect::<Result<_, _>>()?;

    let mut values = Vec::with_capacity(n);
    values.push(system.initial_value(excitation));
    let mut reliable_up_to = grid.time(n - 1);
    let mut found_unreliable = false;
    for (i, (v, ok)) in evaluated.into_iter().enumerate() {
        values.push(v);
        if !ok && !found_unreliable {
            found_unreliable = true;
            reliable_up_to = grid.time(i);
        }
    }
    Ok(TimeSeries {
        grid: *grid,
        values,
        reliable_up_to,
    })
}

/// Impulse response of `1/(a·s^α + b)` via its Mittag-Leffler closed form,
/// `(1/a)·t^{α−1}·E_{α,α}(−(b/a)·t^α)`.
///
/// Independent of the R-function series path, so it doubles as an oracle for
/// pseudo-class impulse responses.
pub fn green_impulse_pseudo(alpha: f64, a_coef: f64, b_coef: f64, t: f64) -> Result<f64, FoError> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(SpecfunError::Domain {
            name: "t",
            value: t,
            reason: "Green's function is evaluated for t > 0",
        }
        .into());
    }
    if !(a_coef > 0.0 && a_coef.is_finite()) {
        return Err(FoError::InvalidPole(a_coef));
    }
    if !(b_coef > 0.0 && b_coef.is_finite()) {
        return Err(FoError::InvalidPole(b_coef));
    }
    let z = -(b_coef / a_coef) * t.powf(alpha);
    let ml = specfun::mittag_leffler(alpha, alpha, z)?;
    Ok(t.powf(alpha - 1.0) * ml.value / a_coef)
}

//! Integer second-order template `τ²ÿ + 2τξẏ + y = u` and the ISE / ITSE
//! error functionals used to fit it.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fosystems::TimeSeries;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RefModelError {
    #[error("time constant tau = {0} must be finite and > 0")]
    InvalidTau(f64),
    #[error("damping ratio xi = {0} must be finite and > 0")]
    InvalidXi(f64),
    #[error("time t = {0} must be finite and >= 0")]
    NegativeTime(f64),
    #[error("cannot integrate an error signal over {0} samples")]
    EmptySeries(usize),
    #[error("unknown criterion {0:?} (expected ise or itse)")]
    UnknownCriterion(String),
}

/// `(τ, ξ)` of the second-order template; `ω = 1/τ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecondOrderParams {
    tau: f64,
    xi: f64,
}

impl SecondOrderParams {
    pub fn new(tau: f64, xi: f64) -> Result<Self, RefModelError> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(RefModelError::InvalidTau(tau));
        }
        if !(xi > 0.0 && xi.is_finite()) {
            return Err(RefModelError::InvalidXi(xi));
        }
        Ok(Self { tau, xi })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn omega(&self) -> f64 {
        1.0 / self.tau
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FitCriterion {
    /// `∫ e²(t) dt`
    Ise,
    /// `∫ t·e²(t) dt`
    Itse,
}

impl FitCriterion {
    pub const BOTH: [FitCriterion; 2] = [FitCriterion::Ise, FitCriterion::Itse];

    pub fn label(self) -> &'static str {
        match self {
            FitCriterion::Ise => "ISE",
            FitCriterion::Itse => "ITSE",
        }
    }
}

impl fmt::Display for FitCriterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for FitCriterion {
    type Err = RefModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ise" => Ok(FitCriterion::Ise),
            "itse" => Ok(FitCriterion::Itse),
            _ => Err(RefModelError::UnknownCriterion(s.to_string())),
        }
    }
}

// Below this relative pole separation the overdamped form switches to its
// expansion about the repeated pole.
const NEAR_CRITICAL: f64 = 1e-8;

/// Poles of `τ²s² + 2τξs + 1` for ξ ≥ 1 as `(centre, half_gap)`, so that
/// `p₁,₂ = centre ± half_gap`.
fn real_poles(p: &SecondOrderParams) -> (f64, f64) {
    let centre = -p.xi / p.tau;
    let half_gap = (p.xi * p.xi - 1.0).max(0.0).sqrt() / p.tau;
    (centre, half_gap)
}

/// `(e^{p₁t} − e^{p₂t}) / (p₁ − p₂)` without cancellation.
fn divided_exp_difference(centre: f64, half_gap: f64, t: f64) -> f64 {
    if half_gap < NEAR_CRITICAL * centre.abs() {
        let x = half_gap * t;
        return (centre * t).exp() * t * (1.0 + x * x / 6.0);
    }
    let p1 = centre + half_gap;
    (p1 * t).exp() * -(-2.0 * half_gap * t).exp_m1() / (2.0 * half_gap)
}

fn check_time(t: f64) -> Result<(), RefModelError> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(RefModelError::NegativeTime(t));
    }
    Ok(())
}

/// Unit step response of the template at time `t`.
///
/// Underdamped (ξ < 1) uses the damped-sinusoid closed form; ξ ≥ 1 uses
/// `1 + (p₂e^{p₁t} − p₁e^{p₂t})/(p₁ − p₂)`, expanded about the repeated pole
/// near critical damping.
pub fn so_step(p: &SecondOrderParams, t: f64) -> Result<f64, RefModelError> {
    check_time(t)?;
    Ok(step_unchecked(p, t))
}

#[inline]
pub(crate) fn step_unchecked(p: &SecondOrderParams, t: f64) -> f64 {
    let SecondOrderParams { tau, xi } = *p;
    if xi < 1.0 {
        let w = 1.0 / tau;
        let root = (1.0 - xi * xi).sqrt();
        let phase = root.atan2(xi);
        return 1.0 - (-xi * w * t).exp() / root * (w * t * root + phase).sin();
    }
    let (centre, half_gap) = real_poles(p);
    // p₂e^{p₁t} − p₁e^{p₂t} = centre·(e^{p₁t} − e^{p₂t}) − half_gap·(e^{p₁t} + e^{p₂t})
    let diff = divided_exp_difference(centre, half_gap, t);
    let mean_exp = if half_gap < NEAR_CRITICAL * centre.abs() {
        let x = half_gap * t;
        (centre * t).exp() * (1.0 + x * x / 2.0)
    } else {
        0.5 * (((centre + half_gap) * t).exp() + ((centre - half_gap) * t).exp())
    };
    1.0 + centre * diff - mean_exp
}

/// Unit impulse response of the template at time `t`; zero at t = 0.
pub fn so_impulse(p: &SecondOrderParams, t: f64) -> Result<f64, RefModelError> {
    check_time(t)?;
    let SecondOrderParams { tau, xi } = *p;
    if xi < 1.0 {
        let w = 1.0 / tau;
        let root = (1.0 - xi * xi).sqrt();
        return Ok(w * (-xi * w * t).exp() / root * (w * t * root).sin());
    }
    let (centre, half_gap) = real_poles(p);
    // p₁p₂ = 1/τ²
    Ok(divided_exp_difference(centre, half_gap, t) / (tau * tau))
}

// Samples between direct re-evaluations of the recurrence in `step_on_grid`.
const RESYNC_EVERY: usize = 128;

/// Calls `visit(i, y(i·dt))` for `i = 0..n` with the template step response.
///
/// Underdamped responses advance `e^{(σ + iω_d)t}` by one complex
/// multiplication per sample, re-anchored to the closed form every
/// [`RESYNC_EVERY`] samples so rounding drift stays at the 1e-14 level.
fn step_on_grid(p: &SecondOrderParams, dt: f64, n: usize, mut visit: impl FnMut(usize, f64)) {
    if p.xi >= 1.0 {
        for i in 0..n {
            visit(i, step_unchecked(p, i as f64 * dt));
        }
        return;
    }
    let w = 1.0 / p.tau;
    let root = (1.0 - p.xi * p.xi).sqrt();
    let sigma = -p.xi * w;
    let wd = w * root;
    let phase = root.atan2(p.xi);
    let amp = 1.0 / root;
    let decay = (sigma * dt).exp();
    let (rot_s, rot_c) = (wd * dt).sin_cos();
    let (step_re, step_im) = (decay * rot_c, decay * rot_s);
    let (mut re, mut im) = (0.0, 0.0);
    for i in 0..n {
        if i % RESYNC_EVERY == 0 {
            let t = i as f64 * dt;
            let mag = (sigma * t).exp();
            let (s, c) = (wd * t + phase).sin_cos();
            re = mag * c;
            im = mag * s;
        } else {
            let next_re = re * step_re - im * step_im;
            im = re * step_im + im * step_re;
            re = next_re;
        }
        visit(i, 1.0 - amp * im);
    }
}

/// ISE or ITSE between a fractional-order step response and the template.
///
/// The error `e(tᵢ) = y_fo(tᵢ) − y_so(tᵢ)` is integrated with the trapezoidal
/// rule over the whole grid of `fo`.
pub fn error_index(
    fo: &TimeSeries,
    p: &SecondOrderParams,
    criterion: FitCriterion,
) -> Result<f64, RefModelError> {
    let values = fo.values();
    if values.len() < 2 {
        return Err(RefModelError::EmptySeries(values.len()));
    }
    let dt = fo.grid().dt();
    let last = values.len() - 1;
    let mut sum = 0.0;
    step_on_grid(p, dt, values.len(), |i, y_so| {
        let e = values[i] - y_so;
        let mut v = match criterion {
            FitCriterion::Ise => e * e,
            FitCriterion::Itse => i as f64 * dt * e * e,
        };
        if i == 0 || i == last {
            v *= 0.5;
        }
        sum += v;
    });
    Ok(sum * dt)
}

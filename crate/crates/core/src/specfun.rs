//! Special functions behind every fractional-order time response.
//!
//! The two-parameter Mittag-Leffler function and the inverse-Laplace power
//! series of `s^ν / (s^α − a)` (R-function) and `s^ν / (s^α − a)^r`
//! (G-function) are all sums of the shape `Σ c_k · t^{p_k} / Γ(p_k + 1)`.
//! They are evaluated by a single summation engine that tracks the largest
//! term seen, so a caller can tell when catastrophic cancellation has eaten
//! the answer.

use thiserror::Error;

/// Terms smaller than this (absolute) count toward truncation.
pub const TERM_TOLERANCE: f64 = 1e-10;
/// Consecutive small terms required before the series is cut.
pub const SMALL_TERM_RUN: usize = 3;
/// Hard cap on the number of summed terms.
pub const MAX_TERMS: usize = 600;
/// Largest intermediate term magnitude for which the sum is trusted.
///
/// Terms are formed in double-double, but the fractional power and Γ on
/// [1, 2) are single f64 values shared by many terms, so the absolute error
/// of a sum is up to about ten ulp of its largest term.
///
/// An alternating sum whose terms reach `M` loses about `log10(M)` digits to
/// cancellation; at `1e12` roughly four significant digits survive.
pub const BREAKDOWN_THRESHOLD: f64 = 1e12;

// Γ(x) overflows f64 just above 171.6.
const DIRECT_GAMMA_LIMIT: f64 = 170.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecfunError {
    #[error("log_gamma requires x > 0, got {0}")]
    GammaDomain(f64),
    #[error("invalid parameter {name} = {value}: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
}

fn domain(name: &'static str, value: f64, reason: &'static str) -> SpecfunError {
    SpecfunError::Domain {
        name,
        value,
        reason,
    }
}

/// Value of a truncated series plus the diagnostics needed to trust it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: f64,
    pub terms_used: usize,
    pub max_term_magnitude: f64,
    pub reliable: bool,
}

/// Parameters of one R-/G-function series evaluation.
///
/// `r = None` selects the R-function series `L⁻¹[s^ν / (s^α − a)]`;
/// `r = Some(r)` selects the G-function series `L⁻¹[s^ν / (s^α − a)^r]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesQuery {
    pub alpha: f64,
    pub nu: f64,
    pub r: Option<f64>,
    pub a: f64,
    pub t: f64,
}

impl SeriesQuery {
    pub fn r_function(alpha: f64, nu: f64, a: f64, t: f64) -> Self {
        Self {
            alpha,
            nu,
            r: None,
            a,
            t,
        }
    }

    pub fn g_function(alpha: f64, r: f64, nu: f64, a: f64, t: f64) -> Self {
        Self {
            alpha,
            nu,
            r: Some(r),
            a,
            t,
        }
    }

    fn validate(&self) -> Result<(), SpecfunError> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(domain("alpha", self.alpha, "must be finite and > 0"));
        }
        if !(self.t > 0.0 && self.t.is_finite()) {
            return Err(domain("t", self.t, "series evaluation needs t > 0"));
        }
        if !self.nu.is_finite() {
            return Err(domain("nu", self.nu, "must be finite"));
        }
        if !self.a.is_finite() {
            return Err(domain("a", self.a, "must be finite"));
        }
        let r = self.r.unwrap_or(1.0);
        if !(r > 0.0 && r.is_finite()) {
            return Err(domain("r", r, "must be finite and > 0"));
        }
        // Gamma arguments (r + j)α − ν grow with j, so the first one decides.
        if r * self.alpha - self.nu <= 0.0 {
            return Err(domain(
                "nu",
                self.nu,
                "leading gamma argument r·α − ν must be positive",
            ));
        }
        Ok(())
    }
}

/// Natural logarithm of Γ(x) for x > 0.
pub fn log_gamma(x: f64) -> Result<f64, SpecfunError> {
    if !(x > 0.0) || x.is_nan() {
        return Err(SpecfunError::GammaDomain(x));
    }
    Ok(libm::lgamma_r(x).0)
}

/// Unevaluated sum `hi + lo` carrying roughly twice the f64 precision.
///
/// Series terms reach 1e7 and beyond before cancelling down to O(1), so the
/// half-ulp lost when each term is rounded to a single f64 shows up directly
/// in the result. Terms are therefore formed and summed as pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn renorm(p: f64, e: f64) -> Self {
        let hi = p + e;
        Dd {
            hi,
            lo: e - (hi - p),
        }
    }

    fn mul_f(self, y: f64) -> Self {
        let p = self.hi * y;
        Dd::renorm(p, self.hi.mul_add(y, -p) + self.lo * y)
    }

    fn mul(self, o: Dd) -> Self {
        let p = self.hi * o.hi;
        Dd::renorm(p, self.hi.mul_add(o.hi, -p) + (self.hi * o.lo + self.lo * o.hi))
    }

    fn div(self, o: Dd) -> Self {
        let q = self.hi / o.hi;
        let back = o.mul_f(q);
        let rem = (self.hi - back.hi) - back.lo + self.lo;
        Dd::renorm(q, rem / o.hi)
    }

    fn neg(self) -> Self {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    fn powi(x: f64, mut n: u32) -> Self {
        let mut base = Dd::new(x);
        let mut acc = Dd::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            n >>= 1;
        }
        acc
    }

    fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }
}

/// Γ(x), with the argument reduced to [1, 2) and the rising factorial
/// accumulated in double-double. `libm::tgamma` alone is off by a few ulp
/// above 24.
fn gamma(x: f64) -> Dd {
    if !(1.0..=DIRECT_GAMMA_LIMIT).contains(&x) {
        return Dd::new(libm::tgamma(x));
    }
    let f = x - (x - 1.0).floor();
    let mut acc = Dd::ONE;
    let mut y = f;
    while y < x - 0.5 {
        acc = acc.mul_f(y);
        y += 1.0;
    }
    acc.mul_f(libm::tgamma(f))
}

/// `t^p` for t > 0, exact in the integer part of a non-negative `p`.
fn power(t: f64, p: f64) -> Dd {
    if p >= 0.0 && p < u32::MAX as f64 {
        let n = p.floor();
        let frac = p - n;
        let whole = Dd::powi(t, n as u32);
        if frac == 0.0 {
            whole
        } else {
            whole.mul_f(t.powf(frac))
        }
    } else {
        Dd::new(t.powf(p))
    }
}

/// `|c| · t^p / Γ(p + 1)` for t > 0, p + 1 > 0.
///
/// The direct quotient is used while both factors are representable. The
/// `exp(p·ln t − lnΓ)` route inherits the absolute rounding error of two
/// logarithms of size ~100, which is amplified by `e^t` in the alternating
/// sums evaluated here, so it is kept as a fallback only.
fn power_over_gamma(coeff: Dd, ln_coeff: f64, t: f64, p: f64) -> Dd {
    let x = p + 1.0;
    if x <= DIRECT_GAMMA_LIMIT && coeff.hi.is_normal() {
        let pow = power(t, p);
        if pow.hi.is_normal() {
            let c = if coeff.hi < 0.0 { coeff.neg() } else { coeff };
            let v = c.mul(pow).div(gamma(x));
            if v.is_finite() {
                return v;
            }
        }
    }
    let lg = libm::lgamma_r(x).0;
    Dd::new((ln_coeff + p * t.ln() - lg).exp())
}

/// Neumaier-compensated running sum.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Sums terms produced by `term(k)` under the shared truncation rule.
///
/// Stops once [`SMALL_TERM_RUN`] consecutive terms fall below
/// [`TERM_TOLERANCE`] after the magnitudes have begun to decrease.
fn sum_series(mut term: impl FnMut(usize) -> Dd) -> SeriesResult {
    let mut acc = CompensatedSum::default();
    let mut max_mag = 0.0f64;
    let mut prev_mag = f64::INFINITY;
    let mut decreasing = false;
    let mut small_run = 0usize;

    for k in 0..MAX_TERMS {
        let Dd { hi: v, lo } = term(k);
        if !v.is_finite() {
            return SeriesResult {
                value: acc.value(),
                terms_used: k.max(1),
                max_term_magnitude: f64::INFINITY,
                reliable: false,
            };
        }
        acc.add(v);
        acc.add(lo);
        let mag = v.abs();
        max_mag = max_mag.max(mag);
        if k > 0 && mag < prev_mag {
            decreasing = true;
        }
        prev_mag = mag;
        if mag < TERM_TOLERANCE {
            small_run += 1;
        } else {
            small_run = 0;
        }
        if decreasing && small_run >= SMALL_TERM_RUN {
            return SeriesResult {
                value: acc.value(),
                terms_used: k + 1,
                max_term_magnitude: max_mag,
                reliable: max_mag <= BREAKDOWN_THRESHOLD,
            };
        }
    }
    SeriesResult {
        value: acc.value(),
        terms_used: MAX_TERMS,
        max_term_magnitude: max_mag,
        reliable: false,
    }
}

/// Two-parameter Mittag-Leffler function `E_{α,β}(z) = Σ z^k / Γ(αk + β)`.
pub fn mittag_leffler(alpha: f64, beta: f64, z: f64) -> Result<SeriesResult, SpecfunError> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(domain("alpha", alpha, "must be finite and > 0"));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(domain("beta", beta, "must be finite and > 0"));
    }
    if !z.is_finite() {
        return Err(domain("z", z, "must be finite"));
    }
    let mag = z.abs();
    let ln_mag = mag.ln();
    let negative = z < 0.0;
    Ok(sum_series(|k| {
        if k == 0 {
            return Dd::ONE.div(gamma(beta));
        }
        if mag == 0.0 {
            return Dd::new(0.0);
        }
        // z^k / Γ(αk + β) written as |z|^k · s^p / Γ(p + 1) with s = 1.
        let kf = k as f64;
        let x = alpha * kf + beta;
        let coeff = Dd::powi(mag, k as u32);
        let v = if x <= DIRECT_GAMMA_LIMIT && coeff.hi.is_normal() {
            coeff.div(gamma(x))
        } else {
            Dd::new((kf * ln_mag - libm::lgamma_r(x).0).exp())
        };
        if negative && k % 2 == 1 {
            v.neg()
        } else {
            v
        }
    }))
}

/// R-function series `L⁻¹[s^ν / (s^α − a)](t) = Σ a^n t^{(n+1)α−1−ν} / Γ((n+1)α − ν)`.
///
/// With ν = −1 this is the step response of `1/(s^α − a)`, with ν = 0 the
/// impulse response.
pub fn r_series(q: &SeriesQuery) -> Result<SeriesResult, SpecfunError> {
    if q.r.is_some() {
        return Err(domain(
            "r",
            q.r.unwrap_or(f64::NAN),
            "r_series takes no multiplicity; use g_series",
        ));
    }
    q.validate()?;
    let SeriesQuery { alpha, nu, a, t, .. } = *q;
    let ln_a = a.abs().ln();
    let negative = a < 0.0;
    let mut coeff = Dd::ONE;
    Ok(sum_series(|n| {
        if n > 0 {
            if a == 0.0 {
                return Dd::new(0.0);
            }
            coeff = coeff.mul_f(a.abs());
        }
        let nf = n as f64;
        let p = ((nf + 1.0) * alpha - nu) - 1.0;
        let v = power_over_gamma(coeff, nf * ln_a, t, p);
        if negative && n % 2 == 1 {
            v.neg()
        } else {
            v
        }
    }))
}

/// G-function series `L⁻¹[s^ν / (s^α − a)^r](t)`.
///
/// The coefficient `c_j = (r)_j a^j / j!` is built by the recurrence
/// `c_j = c_{j−1} · (1 − j − r) · (−a) / j`, `c_0 = 1`, and multiplies
/// `t^{(r+j)α−ν−1} / Γ((r+j)α − ν)`.
pub fn g_series(q: &SeriesQuery) -> Result<SeriesResult, SpecfunError> {
    let Some(r) = q.r else {
        return Err(domain("r", f64::NAN, "g_series needs a multiplicity r"));
    };
    q.validate()?;
    let SeriesQuery { alpha, nu, a, t, .. } = *q;
    let mut coeff = Dd::ONE;
    let mut ln_coeff = 0.0f64;
    let mut negative = false;
    Ok(sum_series(|j| {
        if j > 0 {
            let jf = j as f64;
            let numer = (1.0 - jf - r) * (-a);
            if numer == 0.0 {
                coeff = Dd::new(0.0);
            }
            if coeff.hi == 0.0 {
                return Dd::new(0.0);
            }
            let factor = Dd::new(numer.abs()).div(Dd::new(jf));
            coeff = coeff.mul(factor);
            ln_coeff += factor.hi.ln();
            negative ^= numer < 0.0;
        }
        let p = ((r + j as f64) * alpha - nu) - 1.0;
        let v = power_over_gamma(coeff, ln_coeff, t, p);
        if negative {
            v.neg()
        } else {
            v
        }
    }))
}

/// `c_j` of [`g_series`] for given `r` and `a`, exposed for checking the
/// recurrence against its closed binomial form.
pub fn g_series_coefficients(r: f64, a: f64, count: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    let mut c = 1.0;
    for j in 0..count {
        if j > 0 {
            let jf = j as f64;
            c *= (1.0 - jf - r) * (-a) / jf;
        }
        out.push(c);
    }
    out
}

//! C ABI for `fodamp`.
//!
//! Conventions:
//! - Every fallible call returns a status code (`FODAMP_OK` on success) and
//!   writes results through out-pointers.
//! - The message of the most recent failure on the calling thread is
//!   available from [`fodamp_last_error`].
//! - Handles are opaque; release them with the matching `_free` function.
//! - Enumerations are passed as `uint32_t` using the `FODAMP_*` constants.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use fodamp::fosystems::{fo_response, Excitation, FoError, FractionalSystem, Horizon, SystemClass, TimeGrid, TimeSeries};
use fodamp::gafit::{fit_system, GaConfig, GaError};
use fodamp::neural::{sweep_specs, Activation, Dataset, NetworkSpec, NetworkWeights, NeuralError, TrainOptions};
use fodamp::refmodel::FitCriterion;

pub const FODAMP_OK: i32 = 0;
pub const FODAMP_ERR_NULL_POINTER: i32 = 1;
pub const FODAMP_ERR_INVALID_ARGUMENT: i32 = 2;
pub const FODAMP_ERR_NUMERICAL_BREAKDOWN: i32 = 3;
pub const FODAMP_ERR_IO: i32 = 4;
pub const FODAMP_ERR_BUFFER_TOO_SMALL: i32 = 5;
pub const FODAMP_ERR_PANIC: i32 = 6;

pub const FODAMP_CLASS_PSEUDO: u32 = 0;
pub const FODAMP_CLASS_META1: u32 = 1;
pub const FODAMP_CLASS_META2: u32 = 2;

pub const FODAMP_INPUT_STEP: u32 = 0;
pub const FODAMP_INPUT_IMPULSE: u32 = 1;

pub const FODAMP_CRITERION_ISE: u32 = 0;
pub const FODAMP_CRITERION_ITSE: u32 = 1;

pub const FODAMP_ACTIVATION_TANSIG: u32 = 0;
pub const FODAMP_ACTIVATION_LOGSIG: u32 = 1;

/// A sampled fractional-order response.
pub struct FodampSeries {
    inner: TimeSeries,
}

/// A trained (τ, ξ) predictor.
pub struct FodampModel {
    inner: NetworkWeights,
}

/// One GA fit.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FodampFit {
    pub alpha: f64,
    pub j_min: f64,
    pub tau: f64,
    pub xi: f64,
    pub generations: u32,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<FoError> for Failure {
    fn from(e: FoError) -> Self {
        let code = match e {
            FoError::Special(_) => FODAMP_ERR_NUMERICAL_BREAKDOWN,
            _ => FODAMP_ERR_INVALID_ARGUMENT,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<GaError> for Failure {
    fn from(e: GaError) -> Self {
        match e {
            GaError::System(fo) => fo.into(),
            GaError::UnreliableResponse { .. } => Failure::new(FODAMP_ERR_NUMERICAL_BREAKDOWN, e.to_string()),
            other => Failure::new(FODAMP_ERR_INVALID_ARGUMENT, other.to_string()),
        }
    }
}

impl From<NeuralError> for Failure {
    fn from(e: NeuralError) -> Self {
        let code = match e {
            NeuralError::Io(_) => FODAMP_ERR_IO,
            NeuralError::NonFinite(_) => FODAMP_ERR_NUMERICAL_BREAKDOWN,
            _ => FODAMP_ERR_INVALID_ARGUMENT,
        };
        Failure::new(code, e.to_string())
    }
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            FODAMP_OK
        }
        Ok(Err(failure)) => {
            set_last_error(&failure.message);
            failure.code
        }
        Err(_) => {
            set_last_error("internal panic");
            FODAMP_ERR_PANIC
        }
    }
}

fn null(name: &str) -> Failure {
    Failure::new(FODAMP_ERR_NULL_POINTER, format!("{name} is null"))
}

fn class_from(code: u32) -> Result<SystemClass, Failure> {
    match code {
        FODAMP_CLASS_PSEUDO => Ok(SystemClass::Pseudo),
        FODAMP_CLASS_META1 => Ok(SystemClass::MetaLead1),
        FODAMP_CLASS_META2 => Ok(SystemClass::MetaLead2),
        _ => Err(Failure::new(FODAMP_ERR_INVALID_ARGUMENT, format!("unknown class code {code}"))),
    }
}

fn input_from(code: u32) -> Result<Excitation, Failure> {
    match code {
        FODAMP_INPUT_STEP => Ok(Excitation::Step),
        FODAMP_INPUT_IMPULSE => Ok(Excitation::Impulse),
        _ => Err(Failure::new(FODAMP_ERR_INVALID_ARGUMENT, format!("unknown input code {code}"))),
    }
}

fn criterion_from(code: u32) -> Result<FitCriterion, Failure> {
    match code {
        FODAMP_CRITERION_ISE => Ok(FitCriterion::Ise),
        FODAMP_CRITERION_ITSE => Ok(FitCriterion::Itse),
        _ => Err(Failure::new(FODAMP_ERR_INVALID_ARGUMENT, format!("unknown criterion code {code}"))),
    }
}

fn activation_from(code: u32) -> Result<Activation, Failure> {
    match code {
        FODAMP_ACTIVATION_TANSIG => Ok(Activation::Tansig),
        FODAMP_ACTIVATION_LOGSIG => Ok(Activation::Logsig),
        _ => Err(Failure::new(FODAMP_ERR_INVALID_ARGUMENT, format!("unknown activation code {code}"))),
    }
}

unsafe fn path_from<'a>(path: *const c_char) -> Result<&'a Path, Failure> {
    if path.is_null() {
        return Err(null("path"));
    }
    CStr::from_ptr(path)
        .to_str()
        .map(Path::new)
        .map_err(|_| Failure::new(FODAMP_ERR_INVALID_ARGUMENT, "path is not valid UTF-8"))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fodamp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread ("" after a success).
///
/// The pointer stays valid until the next `fodamp_*` call on the same thread.
#[no_mangle]
pub extern "C" fn fodamp_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Simulates a step or impulse response on a uniform grid.
///
/// Unless `allow_unreliable` is set, `t_max` must not exceed the class's
/// reliable horizon. On success `*out` receives a new handle.
///
/// # Safety
/// `out` must be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn fodamp_simulate(
    system_class: u32,
    alpha: f64,
    input: u32,
    dt: f64,
    t_max: f64,
    allow_unreliable: bool,
    out: *mut *mut FodampSeries,
) -> i32 {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let system = FractionalSystem::new(class_from(system_class)?, alpha)?;
        let grid = TimeGrid::new(dt, t_max)?;
        let horizon = if allow_unreliable { Horizon::Override } else { Horizon::Enforce };
        let series = fo_response(&system, input_from(input)?, &grid, horizon)?;
        *out = Box::into_raw(Box::new(FodampSeries { inner: series }));
        Ok(())
    })
}

/// Number of samples in `series` (0 for a null handle).
///
/// # Safety
/// `series` must be null or a live handle from [`fodamp_simulate`].
#[no_mangle]
pub unsafe extern "C" fn fodamp_series_len(series: *const FodampSeries) -> usize {
    series.as_ref().map_or(0, |s| s.inner.values().len())
}

/// Time step of `series` (NaN for a null handle).
///
/// # Safety
/// `series` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fodamp_series_dt(series: *const FodampSeries) -> f64 {
    series.as_ref().map_or(f64::NAN, |s| s.inner.grid().dt())
}

/// Last time up to which every sample is trusted (NaN for a null handle).
///
/// # Safety
/// `series` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fodamp_series_reliable_up_to(series: *const FodampSeries) -> f64 {
    series.as_ref().map_or(f64::NAN, |s| s.inner.reliable_up_to())
}

/// Copies the samples into `buf`, which must hold at least
/// [`fodamp_series_len`] values.
///
/// # Safety
/// `series` must be a live handle; `buf` must be valid for `capacity` writes.
#[no_mangle]
pub unsafe extern "C" fn fodamp_series_values(
    series: *const FodampSeries,
    buf: *mut f64,
    capacity: usize,
) -> i32 {
    guard(|| {
        let s = series.as_ref().ok_or_else(|| null("series"))?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        let values = s.inner.values();
        if capacity < values.len() {
            return Err(Failure::new(
                FODAMP_ERR_BUFFER_TOO_SMALL,
                format!("buffer holds {capacity} values, series has {}", values.len()),
            ));
        }
        std::ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
        Ok(())
    })
}

/// Releases a series handle. Null is ignored.
///
/// # Safety
/// `series` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fodamp_series_free(series: *mut FodampSeries) {
    if !series.is_null() {
        drop(Box::from_raw(series));
    }
}

/// GA fit of a second-order (τ, ξ) model to the class's step response with
/// default GA settings.
///
/// # Safety
/// `out` must be null or valid for writing one [`FodampFit`].
#[no_mangle]
pub unsafe extern "C" fn fodamp_fit(
    system_class: u32,
    alpha: f64,
    criterion: u32,
    seed: u64,
    out: *mut FodampFit,
) -> i32 {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let system = FractionalSystem::new(class_from(system_class)?, alpha)?;
        let r = fit_system(&system, criterion_from(criterion)?, &GaConfig::default().with_seed(seed))?;
        *out = FodampFit {
            alpha: r.alpha,
            j_min: r.j_min,
            tau: r.tau,
            xi: r.xi,
            generations: r.generations_used as u32,
        };
        Ok(())
    })
}

/// Trains a network on the built-in ITSE dataset of `system_class`, keeping the
/// best of `runs` seeded full-batch runs.
///
/// `activations` lists one `FODAMP_ACTIVATION_*` code per hidden layer
/// (1 or 2 layers).
///
/// # Safety
/// `activations` must be valid for `hidden_layers` reads; `out` must be null
/// or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn fodamp_model_train(
    system_class: u32,
    neurons: usize,
    activations: *const u32,
    hidden_layers: usize,
    seed: u64,
    runs: usize,
    max_epochs: usize,
    out: *mut *mut FodampModel,
) -> i32 {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if activations.is_null() {
            return Err(null("activations"));
        }
        let acts = std::slice::from_raw_parts(activations, hidden_layers)
            .iter()
            .map(|&c| activation_from(c))
            .collect::<Result<Vec<_>, _>>()?;
        let spec = NetworkSpec::new(neurons, acts)?;
        let data = Dataset::builtin(class_from(system_class)?);
        let opts = TrainOptions::default().with_max_epochs(max_epochs);
        let report = sweep_specs(&[spec], &data, runs, seed, &opts)?
            .pop()
            .expect("one report per spec");
        let weights = report
            .best_weights
            .ok_or_else(|| Failure::new(FODAMP_ERR_NUMERICAL_BREAKDOWN, "every training run failed"))?;
        *out = Box::into_raw(Box::new(FodampModel { inner: weights }));
        Ok(())
    })
}

/// Loads a model file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be null or valid for
/// writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn fodamp_model_load(path: *const c_char, out: *mut *mut FodampModel) -> i32 {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let weights = NetworkWeights::load(path_from(path)?)?;
        *out = Box::into_raw(Box::new(FodampModel { inner: weights }));
        Ok(())
    })
}

/// Saves a model file.
///
/// # Safety
/// `model` must be a live handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn fodamp_model_save(model: *const FodampModel, path: *const c_char) -> i32 {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        m.inner.save(path_from(path)?)?;
        Ok(())
    })
}

/// Final training MSE recorded in the model (NaN for a null handle or an
/// untrained model).
///
/// # Safety
/// `model` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fodamp_model_mse(model: *const FodampModel) -> f64 {
    model
        .as_ref()
        .and_then(|m| m.inner.training.final_mse)
        .unwrap_or(f64::NAN)
}

/// Predicts (τ, ξ) at `alpha`. `*extrapolated` (if non-null) is set when
/// `alpha` lies outside the training range.
///
/// # Safety
/// `model` must be a live handle; `tau` and `xi` valid for one write;
/// `extrapolated` null or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn fodamp_model_predict(
    model: *const FodampModel,
    alpha: f64,
    tau: *mut f64,
    xi: *mut f64,
    extrapolated: *mut bool,
) -> i32 {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        if tau.is_null() || xi.is_null() {
            return Err(null("tau/xi"));
        }
        if !alpha.is_finite() {
            return Err(Failure::new(FODAMP_ERR_INVALID_ARGUMENT, "alpha must be finite"));
        }
        let p = m.inner.forward(alpha);
        *tau = p.tau;
        *xi = p.xi;
        if !extrapolated.is_null() {
            *extrapolated = p.extrapolated;
        }
        Ok(())
    })
}

/// Releases a model handle. Null is ignored.
///
/// # Safety
/// `model` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fodamp_model_free(model: *mut FodampModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

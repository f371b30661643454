#ifndef FODAMP_H
#define FODAMP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define FODAMP_OK 0

#define FODAMP_ERR_NULL_POINTER 1

#define FODAMP_ERR_INVALID_ARGUMENT 2

#define FODAMP_ERR_NUMERICAL_BREAKDOWN 3

#define FODAMP_ERR_IO 4

#define FODAMP_ERR_BUFFER_TOO_SMALL 5

#define FODAMP_ERR_PANIC 6

#define FODAMP_CLASS_PSEUDO 0

#define FODAMP_CLASS_META1 1

#define FODAMP_CLASS_META2 2

#define FODAMP_INPUT_STEP 0

#define FODAMP_INPUT_IMPULSE 1

#define FODAMP_CRITERION_ISE 0

#define FODAMP_CRITERION_ITSE 1

#define FODAMP_ACTIVATION_TANSIG 0

#define FODAMP_ACTIVATION_LOGSIG 1

/**
 * A trained (τ, ξ) predictor.
 */
typedef struct FodampModel FodampModel;

/**
 * A sampled fractional-order response.
 */
typedef struct FodampSeries FodampSeries;

/**
 * One GA fit.
 */
typedef struct FodampFit {
  double alpha;
  double j_min;
  double tau;
  double xi;
  uint32_t generations;
} FodampFit;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *fodamp_version(void);

/**
 * Message of the last failed call on this thread ("" after a success).
 *
 * The pointer stays valid until the next `fodamp_*` call on the same thread.
 */
const char *fodamp_last_error(void);

/**
 * Simulates a step or impulse response on a uniform grid.
 *
 * Unless `allow_unreliable` is set, `t_max` must not exceed the class's
 * reliable horizon. On success `*out` receives a new handle.
 *
 * # Safety
 * `out` must be null or valid for writing one pointer.
 */
int32_t fodamp_simulate(uint32_t system_class,
                        double alpha,
                        uint32_t input,
                        double dt,
                        double t_max,
                        bool allow_unreliable,
                        struct FodampSeries **out);

/**
 * Number of samples in `series` (0 for a null handle).
 *
 * # Safety
 * `series` must be null or a live handle from [`fodamp_simulate`].
 */
size_t fodamp_series_len(const struct FodampSeries *series);

/**
 * Time step of `series` (NaN for a null handle).
 *
 * # Safety
 * `series` must be null or a live handle.
 */
double fodamp_series_dt(const struct FodampSeries *series);

/**
 * Last time up to which every sample is trusted (NaN for a null handle).
 *
 * # Safety
 * `series` must be null or a live handle.
 */
double fodamp_series_reliable_up_to(const struct FodampSeries *series);

/**
 * Copies the samples into `buf`, which must hold at least
 * [`fodamp_series_len`] values.
 *
 * # Safety
 * `series` must be a live handle; `buf` must be valid for `capacity` writes.
 */
int32_t fodamp_series_values(const struct FodampSeries *series, double *buf, size_t capacity);

/**
 * Releases a series handle. Null is ignored.
 *
 * # Safety
 * `series` must be null or a handle not yet freed.
 */
void fodamp_series_free(struct FodampSeries *series);

/**
 * GA fit of a second-order (τ, ξ) model to the class's step response with
 * default GA settings.
 *
 * # Safety
 * `out` must be null or valid for writing one [`FodampFit`].
 */
int32_t fodamp_fit(uint32_t system_class,
                   double alpha,
                   uint32_t criterion,
                   uint64_t seed,
                   struct FodampFit *out);

/**
 * Trains a network on the built-in ITSE dataset of `system_class`, keeping the
 * best of `runs` seeded full-batch runs.
 *
 * `activations` lists one `FODAMP_ACTIVATION_*` code per hidden layer
 * (1 or 2 layers).
 *
 * # Safety
 * `activations` must be valid for `hidden_layers` reads; `out` must be null
 * or valid for writing one pointer.
 */
int32_t fodamp_model_train(uint32_t system_class,
                           size_t neurons,
                           const uint32_t *activations,
                           size_t hidden_layers,
                           uint64_t seed,
                           size_t runs,
                           size_t max_epochs,
                           struct FodampModel **out);

/**
 * Loads a model file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be null or valid for
 * writing one pointer.
 */
int32_t fodamp_model_load(const char *path, struct FodampModel **out);

/**
 * Saves a model file.
 *
 * # Safety
 * `model` must be a live handle; `path` a NUL-terminated string.
 */
int32_t fodamp_model_save(const struct FodampModel *model, const char *path);

/**
 * Final training MSE recorded in the model (NaN for a null handle or an
 * untrained model).
 *
 * # Safety
 * `model` must be null or a live handle.
 */
double fodamp_model_mse(const struct FodampModel *model);

/**
 * Predicts (τ, ξ) at `alpha`. `*extrapolated` (if non-null) is set when
 * `alpha` lies outside the training range.
 *
 * # Safety
 * `model` must be a live handle; `tau` and `xi` valid for one write;
 * `extrapolated` null or valid for one write.
 */
int32_t fodamp_model_predict(const struct FodampModel *model,
                             double alpha,
                             double *tau,
                             double *xi,
                             bool *extrapolated);

/**
 * Releases a model handle. Null is ignored.
 *
 * # Safety
 * `model` must be null or a handle not yet freed.
 */
void fodamp_model_free(struct FodampModel *model);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FODAMP_H */

#ifndef TWINBEAM_H
#define TWINBEAM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define TB_SECULAR_DERIVED 0

#define TB_SECULAR_AS_PRINTED 1

typedef enum TbStatus {
  TB_STATUS_OK = 0,
  TB_STATUS_NULL_POINTER = 1,
  TB_STATUS_INVALID_CONFIG = 2,
  TB_STATUS_OUT_OF_RANGE = 3,
  TB_STATUS_NUMERICAL = 4,
  TB_STATUS_PANIC = 5,
} TbStatus;

// Validated physical and grid configuration.
typedef struct TbConfig TbConfig;

// Detected deaths and revivals.
typedef struct TbEvents TbEvents;

// Sampled separability function.
typedef struct TbTrace TbTrace;

typedef struct TbEventSummary {
  // 1 when a death was found, then `tau_dis` holds its time.
  int has_tau_dis;
  double tau_dis;
  size_t n_crossings;
  size_t n_revivals;
  size_t n_touches;
  int survived;
} TbEventSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *tb_version(void);

// Message for the most recent failure on this thread, or NULL.
// The pointer stays valid until the next call into the library on this thread.
const char *tb_last_error(void);

// Build and validate a configuration. `secular_form` is one of the
// `TB_SECULAR_*` constants.
//
// # Safety
// `out` must be a valid pointer to writable storage for one pointer.
enum TbStatus tb_config_new(double r,
                            double x1,
                            double x2,
                            double alpha,
                            double temperature_ratio,
                            double tau_max,
                            double dtau,
                            double refine_tol,
                            int secular_form,
                            struct TbConfig **out);

// Number of configuration warnings (squeezing outside the studied band,
// temperature too low for the high-temperature forms).
//
// # Safety
// `config` must be NULL or a pointer returned by [`tb_config_new`].
size_t tb_config_warning_count(const struct TbConfig *config);

// # Safety
// `config` must be NULL or a pointer returned by [`tb_config_new`] not yet freed.
void tb_config_free(struct TbConfig *config);

// `S(τ)` evaluated directly at one time.
//
// # Safety
// `config` must come from [`tb_config_new`]; `out` must be writable.
enum TbStatus tb_separability_at(const struct TbConfig *config, double tau, double *out);

// Separability function of a 4×4 covariance matrix in row-major order
// with quadratures `(x1, p1, x2, p2)`.
//
// # Safety
// `sigma` must point to 16 readable doubles; `out` must be writable.
enum TbStatus tb_simon_separability(const double *sigma, double *out);

// Sample `S(τ)` on the configuration's grid.
//
// # Safety
// `config` must come from [`tb_config_new`]; `out` must be writable.
enum TbStatus tb_trace_compute(const struct TbConfig *config, struct TbTrace **out);

// # Safety
// `trace` must be NULL or come from [`tb_trace_compute`].
size_t tb_trace_len(const struct TbTrace *trace);

// One row of the trace. Any output pointer may be NULL.
//
// # Safety
// `trace` must come from [`tb_trace_compute`]; non-null outputs must be writable.
enum TbStatus tb_trace_sample(const struct TbTrace *trace,
                              size_t index,
                              double *tau,
                              double *s,
                              double *gamma1,
                              double *gamma2,
                              int *physical);

// Copy up to `capacity` values of `S` into `buffer`; `written` receives the count.
//
// # Safety
// `buffer` must hold `capacity` doubles; `written` may be NULL.
enum TbStatus tb_trace_copy_s(const struct TbTrace *trace,
                              double *buffer,
                              size_t capacity,
                              size_t *written);

// # Safety
// `trace` must be NULL or come from [`tb_trace_compute`] and not yet be freed.
void tb_trace_free(struct TbTrace *trace);

// Detect deaths and revivals, refining each to the configured tolerance.
//
// # Safety
// `trace` must come from [`tb_trace_compute`]; `out` must be writable.
enum TbStatus tb_events_detect(const struct TbTrace *trace, struct TbEvents **out);

// # Safety
// `events` must come from [`tb_events_detect`]; `out` must be writable.
enum TbStatus tb_events_summary(const struct TbEvents *events, struct TbEventSummary *out);

// Time of crossing `index`; `is_death` is 1 for a death, 0 for a revival.
//
// # Safety
// `events` must come from [`tb_events_detect`]; non-null outputs must be writable.
enum TbStatus tb_events_crossing(const struct TbEvents *events,
                                 size_t index,
                                 double *tau,
                                 int *is_death);

// # Safety
// `events` must be NULL or come from [`tb_events_detect`] and not yet be freed.
void tb_events_free(struct TbEvents *events);

// Diffusion coefficient `Δ(τ)` for an oscillator of frequency `freq` (units of the cut-off).
double tb_delta(double tau, double freq, double alpha, double temperature_ratio);

double tb_pi(double tau, double freq, double alpha, double temperature_ratio);

double tb_gamma(double tau, double freq, double alpha);

// Integrated damping `Γ(τ) = 2∫γ`.
double tb_big_gamma(double tau, double freq, double alpha);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TWINBEAM_H */

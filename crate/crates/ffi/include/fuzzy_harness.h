#ifndef FUZZY_HARNESS_H
#define FUZZY_HARNESS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FhStatus {
  FH_STATUS_OK = 0,
  FH_STATUS_NULL_POINTER = 1,
  FH_STATUS_INVALID_ARGUMENT = 2,
  FH_STATUS_PARSE_ERROR = 3,
  FH_STATUS_UTF8_ERROR = 4,
  FH_STATUS_PANIC = 5,
} FhStatus;

/**
 * Opaque treadmill engine.
 */
typedef struct FhEngine FhEngine;

/**
 * Opaque simulation result.
 */
typedef struct FhTrace FhTrace;

typedef struct FhDistances {
  double front;
  double rear;
  double left;
  double right;
} FhDistances;

typedef struct FhSteering {
  double steer_x;
  double steer_y;
} FhSteering;

typedef struct FhCorrection {
  double cx;
  double cy;
} FhCorrection;

/**
 * Simulation parameters. Start from [`fh_sim_config_default`].
 */
typedef struct FhSimConfig {
  /**
   * One of the `FhTrackKind` values.
   */
  uint32_t track;
  size_t steps;
  double speed;
  double noise_sigma;
  uint64_t seed;
  bool controller_enabled;
  double gain;
} FhSimConfig;

/**
 * One trace row. `off_track` is nonzero on the record that left the field.
 */
typedef struct FhTraceRecord {
  size_t step;
  double x;
  double y;
  double d_front;
  double d_rear;
  double d_left;
  double d_right;
  double steer_x;
  double steer_y;
  double cx;
  double cy;
  bool off_track;
} FhTraceRecord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread. Valid until the next
 * failing call on the same thread; empty if nothing has failed.
 */
const char *fh_last_error(void);

/**
 * Engine with the built-in ten-rule base. Never null.
 */
struct FhEngine *fh_engine_new_default(void);

/**
 * Builds an engine from NUL-terminated rule-file text.
 *
 * # Safety
 * `rules` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum FhStatus fh_engine_from_rules(const char *rules, struct FhEngine **out);

/**
 * # Safety
 * `engine` must come from this library and not be used afterwards.
 */
void fh_engine_free(struct FhEngine *engine);

/**
 * # Safety
 * `engine` must be a live engine handle or null.
 */
size_t fh_engine_rule_count(const struct FhEngine *engine);

/**
 * # Safety
 * `engine` must be a live engine handle and `out` a valid pointer.
 */
enum FhStatus fh_engine_steer(const struct FhEngine *engine,
                              struct FhDistances distances,
                              struct FhSteering *out);

/**
 * Steering for a position on the default 500 × 500 field.
 *
 * # Safety
 * `engine` must be a live engine handle and `out` a valid pointer.
 */
enum FhStatus fh_engine_steer_position(const struct FhEngine *engine,
                                       double x,
                                       double y,
                                       struct FhSteering *out);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum FhStatus fh_command_to_correction(struct FhSteering steering,
                                       double gain,
                                       struct FhCorrection *out);

struct FhSimConfig fh_sim_config_default(void);

/**
 * Runs a simulation on one of the built-in tracks. A null `engine` uses the
 * built-in rules.
 *
 * # Safety
 * `engine` must be a live handle or null; `config` and `out` valid pointers.
 */
enum FhStatus fh_simulate(const struct FhEngine *engine,
                          const struct FhSimConfig *config,
                          struct FhTrace **out);

/**
 * Like [`fh_simulate`] but walks `n_points` waypoints read from `xy` as
 * interleaved `x, y` pairs; `config.track` is ignored.
 *
 * # Safety
 * `xy` must point to `2 * n_points` doubles.
 */
enum FhStatus fh_simulate_waypoints(const struct FhEngine *engine,
                                    const struct FhSimConfig *config,
                                    const double *xy,
                                    size_t n_points,
                                    struct FhTrace **out);

/**
 * # Safety
 * `trace` must be a live trace handle or null.
 */
size_t fh_trace_len(const struct FhTrace *trace);

/**
 * Step at which the patient left the field, or -1 if the run completed.
 *
 * # Safety
 * `trace` must be a live trace handle or null.
 */
int64_t fh_trace_off_track_step(const struct FhTrace *trace);

/**
 * # Safety
 * `trace` must be a live trace handle and `out` a valid pointer.
 */
enum FhStatus fh_trace_get(const struct FhTrace *trace, size_t index, struct FhTraceRecord *out);

/**
 * # Safety
 * `trace` must come from this library and not be used afterwards.
 */
void fh_trace_free(struct FhTrace *trace);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FUZZY_HARNESS_H */

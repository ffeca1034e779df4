#ifndef RYDBERG_VQD_H
#define RYDBERG_VQD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

/**
 * Result code of every fallible call.
 */
typedef enum RvqdStatus {
  RVQD_STATUS_OK = 0,
  RVQD_STATUS_NULL_POINTER = 1,
  RVQD_STATUS_INVALID_UTF8 = 2,
  RVQD_STATUS_CONFIG = 3,
  RVQD_STATUS_USAGE = 4,
  RVQD_STATUS_UNPHYSICAL = 5,
  RVQD_STATUS_DEGENERATE_STATE = 6,
  RVQD_STATUS_SCHEDULING = 7,
  RVQD_STATUS_SYNTHESIS = 8,
  RVQD_STATUS_IO = 9,
  RVQD_STATUS_JSON = 10,
  RVQD_STATUS_OUT_OF_RANGE = 11,
  RVQD_STATUS_PANIC = 12,
} RvqdStatus;

/**
 * Gate operators used by [`rvqd_execute`].
 */
typedef enum RvqdGateModel {
  /**
   * Non-unitary device operators.
   */
  RVQD_GATE_MODEL_NATIVE = 0,
  /**
   * Ideal unitary references.
   */
  RVQD_GATE_MODEL_IDEAL = 1,
} RvqdGateModel;

/**
 * A scheduled native circuit.
 */
typedef struct RvqdCircuit RvqdCircuit;

/**
 * Device timing and noise parameters.
 */
typedef struct RvqdParams RvqdParams;

/**
 * The records and per-size summaries of a benchmark run.
 */
typedef struct RvqdRun RvqdRun;

/**
 * An unnormalized density matrix after execution.
 */
typedef struct RvqdState RvqdState;

/**
 * One benchmark datum; see `BenchRecord` in the Rust API.
 */
typedef struct RvqdRecord {
  size_t size;
  double raw;
  double corrected;
  double p_loss;
  double wall_clock_us;
} RvqdRecord;

/**
 * Aggregate over all records of one size. The pass flags are
 * `-1` when the benchmark has no pass criterion, otherwise 0 or 1.
 */
typedef struct RvqdSummary {
  size_t size;
  double mean_raw;
  double mean_corrected;
  double sem;
  double mean_loss;
  int32_t pass_raw;
  int32_t pass_corrected;
} RvqdSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent failure on this thread, or an empty string.
 * The pointer stays valid until the next failing call on this thread.
 */
const char *rvqd_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *rvqd_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void rvqd_string_free(char *s);

/**
 * Default device parameters. Never null.
 */
struct RvqdParams *rvqd_params_default(void);

/**
 * Parameters with no preparation error and no idle decoherence. Never null.
 */
struct RvqdParams *rvqd_params_noiseless(void);

/**
 * Parses a JSON object of device fields; missing fields take defaults.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum RvqdStatus rvqd_params_from_json(const char *json, struct RvqdParams **out);

/**
 * Serializes the parameters as JSON. Returns null if `params` is null;
 * release the result with [`rvqd_string_free`].
 *
 * # Safety
 * `params` must be null or a live handle.
 */
char *rvqd_params_to_json(const struct RvqdParams *params);

/**
 * # Safety
 * `params` must be null or a handle from this library not yet freed.
 */
void rvqd_params_free(struct RvqdParams *params);

/**
 * Parses and validates a scheduled circuit in its JSON form.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum RvqdStatus rvqd_circuit_from_json(const char *json, struct RvqdCircuit **out);

/**
 * Register size, or 0 if `circuit` is null.
 *
 * # Safety
 * `circuit` must be null or a live handle.
 */
size_t rvqd_circuit_n_qubits(const struct RvqdCircuit *circuit);

/**
 * Total scheduled duration in microseconds, or 0 if `circuit` is null.
 *
 * # Safety
 * `circuit` must be null or a live handle.
 */
double rvqd_circuit_wall_clock(const struct RvqdCircuit *circuit);

/**
 * # Safety
 * `circuit` must be null or a handle from this library not yet freed.
 */
void rvqd_circuit_free(struct RvqdCircuit *circuit);

/**
 * Executes `circuit` on the virtual device and returns the final state.
 *
 * # Safety
 * `circuit` and `params` must be live handles and `out` a writable pointer.
 */
enum RvqdStatus rvqd_execute(const struct RvqdCircuit *circuit,
                             const struct RvqdParams *params,
                             enum RvqdGateModel model,
                             struct RvqdState **out);

/**
 * Register size, or 0 if `state` is null.
 *
 * # Safety
 * `state` must be null or a live handle.
 */
size_t rvqd_state_n_qubits(const struct RvqdState *state);

/**
 * Trace of the state (1 minus the loss probability), or NaN if null.
 *
 * # Safety
 * `state` must be null or a live handle.
 */
double rvqd_state_trace(const struct RvqdState *state);

/**
 * Loss probability `1 - tr(rho)`, or NaN if null.
 *
 * # Safety
 * `state` must be null or a live handle.
 */
double rvqd_state_loss(const struct RvqdState *state);

/**
 * Reads the matrix element `rho[row][col]`.
 *
 * # Safety
 * `state` must be a live handle; `re` and `im` writable pointers.
 */
enum RvqdStatus rvqd_state_element(const struct RvqdState *state,
                                   size_t row,
                                   size_t col,
                                   double *re,
                                   double *im);

/**
 * Raw (unnormalized) outcome probabilities of the qubits in `measured`,
 * written to `out` in basis order with `measured[0]` as the most
 * significant bit. `out_len` must be at least `2^n_measured`.
 *
 * # Safety
 * `state` must be a live handle, `measured` must point to `n_measured`
 * readable values and `out` to `out_len` writable doubles.
 */
enum RvqdStatus rvqd_state_probabilities(const struct RvqdState *state,
                                         const size_t *measured,
                                         size_t n_measured,
                                         double *out,
                                         size_t out_len);

/**
 * # Safety
 * `state` must be null or a handle from this library not yet freed.
 */
void rvqd_state_free(struct RvqdState *state);

/**
 * Runs a benchmark described by a JSON run configuration (the same schema
 * as the command-line tool; `benchmark` and `master_seed` are required).
 * Nothing is written to disk.
 *
 * # Safety
 * `config_json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum RvqdStatus rvqd_run_benchmark(const char *config_json, struct RvqdRun **out);

/**
 * Number of records, or 0 if `run` is null.
 *
 * # Safety
 * `run` must be null or a live handle.
 */
size_t rvqd_run_record_count(const struct RvqdRun *run);

/**
 * Copies record `index` into `out`.
 *
 * # Safety
 * `run` must be a live handle and `out` a writable pointer.
 */
enum RvqdStatus rvqd_run_record(const struct RvqdRun *run, size_t index, struct RvqdRecord *out);

/**
 * Item identifier of record `index` (circuit index, seed string or
 * target and iteration), or null when out of range. Release with
 * [`rvqd_string_free`].
 *
 * # Safety
 * `run` must be null or a live handle.
 */
char *rvqd_run_record_id(const struct RvqdRun *run, size_t index);

/**
 * Number of per-size summaries, or 0 if `run` is null.
 *
 * # Safety
 * `run` must be null or a live handle.
 */
size_t rvqd_run_summary_count(const struct RvqdRun *run);

/**
 * Copies summary `index` into `out`.
 *
 * # Safety
 * `run` must be a live handle and `out` a writable pointer.
 */
enum RvqdStatus rvqd_run_summary(const struct RvqdRun *run, size_t index, struct RvqdSummary *out);

/**
 * # Safety
 * `run` must be null or a handle from this library not yet freed.
 */
void rvqd_run_free(struct RvqdRun *run);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RYDBERG_VQD_H */

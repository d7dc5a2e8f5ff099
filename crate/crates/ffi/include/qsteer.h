#ifndef QSTEER_H
#define QSTEER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Number of doubles in an interleaved (re, im) row-major 4x4 matrix.
 */
#define QS_STATE_ENTRIES 32

typedef enum QsStatus {
  QS_STATUS_OK = 0,
  QS_STATUS_NULL_POINTER = 1,
  QS_STATUS_NOT_HERMITIAN = 2,
  QS_STATUS_DIMENSION_UNSUPPORTED = 3,
  QS_STATUS_NOT_PSD = 4,
  QS_STATUS_TRACE_NOT_UNIT = 5,
  QS_STATUS_NON_FINITE = 6,
  QS_STATUS_NOT_NORMALIZED = 7,
  QS_STATUS_PARAMETER_OUT_OF_RANGE = 8,
  QS_STATUS_CHANNEL_INCOMPLETE = 9,
  QS_STATUS_INDEX_OUT_OF_RANGE = 10,
  QS_STATUS_NOT_REALIZABLE = 11,
  QS_STATUS_PARSE = 12,
  QS_STATUS_INTERNAL = 13,
} QsStatus;

typedef enum QsChannel {
  QS_CHANNEL_AMPLITUDE_DAMPING = 0,
  QS_CHANNEL_PHASE_DAMPING = 1,
} QsChannel;

typedef enum QsQubit {
  QS_QUBIT_A = 0,
  QS_QUBIT_B = 1,
} QsQubit;

typedef enum QsClassification {
  QS_CLASSIFICATION_SEPARABLE_CANDIDATE = 0,
  QS_CLASSIFICATION_ENTANGLED_UNSTEERABLE_BY_F = 1,
  QS_CLASSIFICATION_STEERABLE = 2,
} QsClassification;

/**
 * Opaque two-qubit density matrix.
 */
typedef struct QsState QsState;

typedef struct QsReport {
  double concurrence;
  double f_value;
  double steerability;
  double purity;
  double q_value;
  double coherence_a;
  double coherence_b;
  double lower_bound;
  double upper_bound;
  double singular_values[3];
  double lambda[4];
  uint32_t classification;
  bool lower_bound_certifies;
} QsReport;

typedef struct QsFalsification {
  uint64_t checked;
  uint64_t violations;
  double worst_margin_lower;
  double worst_margin_upper;
  double worst_coherence_identity;
  double worst_coherence_inequality;
} QsFalsification;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Build a state from 32 doubles: row-major entries, real then imaginary part.
 *
 * # Safety
 * `entries` must point to `len` readable doubles and `out` must be writable.
 */
enum QsStatus qs_state_from_entries(const double *entries, size_t len, struct QsState **out);

/**
 * cos θ|00⟩ + sin θ|11⟩ for θ in (0, π/2).
 *
 * # Safety
 * `out` must be writable.
 */
enum QsStatus qs_state_bell_like(double theta, struct QsState **out);

/**
 * p|φ⟩⟨φ| + (1 − p)I/4 with |φ⟩ the Bell-like state at angle θ.
 *
 * # Safety
 * `out` must be writable.
 */
enum QsStatus qs_state_werner_like(double p, double theta, struct QsState **out);

/**
 * Ginibre-induced random state number `index` of the stream `seed`.
 * `rank` is 1..=4, or 0 for a rank drawn uniformly.
 *
 * # Safety
 * `out` must be writable.
 */
enum QsStatus qs_state_random(uint64_t seed, uint64_t index, uint8_t rank, struct QsState **out);

/**
 * Send one qubit of `state` through a damping channel of strength `eta`.
 *
 * # Safety
 * `state` must be a live handle and `out` writable.
 */
enum QsStatus qs_state_apply_channel(const struct QsState *state,
                                     enum QsChannel channel,
                                     double eta,
                                     enum QsQubit target,
                                     struct QsState **out);

/**
 * Copy the matrix out in the layout accepted by `qs_state_from_entries`.
 *
 * # Safety
 * `state` must be a live handle and `out` must hold 32 doubles.
 */
enum QsStatus qs_state_entries(const struct QsState *state, double *out);

/**
 * Release a handle. Null is ignored.
 *
 * # Safety
 * `state` must come from a `qs_state_*` constructor and not be freed twice.
 */
void qs_state_free(struct QsState *state);

/**
 * Every measure of one state.
 *
 * # Safety
 * `state` must be a live handle and `out` writable.
 */
enum QsStatus qs_analyze(const struct QsState *state, struct QsReport *out);

/**
 * Check both bounds on `count` Ginibre states (`rank` as in `qs_state_random`).
 *
 * # Safety
 * `out` must be writable.
 */
enum QsStatus qs_verify(uint64_t seed, uint64_t count, uint8_t rank, struct QsFalsification *out);

/**
 * Check both bounds on caller-held states.
 *
 * # Safety
 * `states` must point to `len` live handles and `out` must be writable.
 */
enum QsStatus qs_verify_states(const struct QsState *const *states,
                               size_t len,
                               struct QsFalsification *out);

/**
 * Steerability of a Werner-unitary state from its concurrence and purity.
 *
 * # Safety
 * `out` must be writable.
 */
enum QsStatus qs_wu_steerability(double concurrence, double purity, double *out);

/**
 * Static, NUL-terminated description of a status code.
 */
const char *qs_status_message(enum QsStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QSTEER_H */

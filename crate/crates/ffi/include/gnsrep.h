#ifndef GNSREP_H
#define GNSREP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every C entry point.
 */
typedef enum GnsrepStatus {
  /**
   * Success; outputs were written.
   */
  GnsrepStatus_Ok = 0,
  /**
   * A required pointer argument was NULL.
   */
  GnsrepStatus_NullPointer = 1,
  /**
   * Input text was not valid UTF-8.
   */
  GnsrepStatus_InvalidUtf8 = 2,
  /**
   * Scenario failed to parse or validate, or an operation was requested
   * that the scenario does not support.
   */
  GnsrepStatus_InvalidScenario = 3,
  /**
   * The computation hit a numerical degeneracy (cutoff or retry failure).
   */
  GnsrepStatus_NumericalDegeneracy = 4,
  /**
   * The provided output buffer is too small.
   */
  GnsrepStatus_BufferTooSmall = 5,
} GnsrepStatus;

/**
 * Opaque handle holding one validated scenario.
 */
typedef struct GnsrepSession GnsrepSession;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Last error message of the current thread as a NUL-terminated string.
 * Never NULL; empty until a call fails. The pointer stays valid until the
 * next failing call on the same thread.
 */
const char *gnsrep_last_error_message(void);

/**
 * Creates a session from scenario JSON.
 *
 * # Safety
 * `json` must point to a NUL-terminated string and `out` to a writable
 * session pointer; both must stay valid for the duration of the call.
 */
enum GnsrepStatus gnsrep_session_from_json(const char *json, struct GnsrepSession **out);

/**
 * Frees a session. NULL is ignored.
 *
 * # Safety
 * `session` must be NULL or a pointer returned by
 * [`gnsrep_session_from_json`] that has not been freed yet.
 */
void gnsrep_session_free(struct GnsrepSession *session);

/**
 * GNS dimensions of the effective (restricted) state: the quotient Hilbert
 * space dimension and the null-ideal dimension.
 *
 * # Safety
 * `session` must be a live session; `hilbert_dim` and `null_dim` must be
 * writable.
 */
enum GnsrepStatus gnsrep_gns_info(const struct GnsrepSession *session,
                                  uintptr_t *hilbert_dim,
                                  uintptr_t *null_dim);

/**
 * Von Neumann entropy (nats) of the density operator extracted from the
 * GNS representation of the effective state with the natural projector
 * family.
 *
 * # Safety
 * `session` must be a live session and `entropy_nats` writable.
 */
enum GnsrepStatus gnsrep_entropy(const struct GnsrepSession *session, double *entropy_nats);

/**
 * Descending spectrum of the extracted density operator. Writes at most
 * `capacity` eigenvalues into `buffer` and the full spectrum length into
 * `written`; fails with `BufferTooSmall` (after writing `written`) when the
 * buffer cannot hold all of them.
 *
 * # Safety
 * `session` must be a live session, `buffer` must point to at least
 * `capacity` doubles, and `written` must be writable.
 */
enum GnsrepStatus gnsrep_spectrum(const struct GnsrepSession *session,
                                  double *buffer,
                                  uintptr_t capacity,
                                  uintptr_t *written);

/**
 * Max deviation between the restricted state and the partial trace over
 * the embedding source's matrix units.
 *
 * # Safety
 * `session` must be a live session and `max_deviation` writable.
 */
enum GnsrepStatus gnsrep_compare_deviation(const struct GnsrepSession *session,
                                           double *max_deviation);

/**
 * Scans the entropies of gauge-deformed density operators over `samples`
 * Haar draws and writes the baseline, sampled minimum and sampled maximum.
 *
 * # Safety
 * `session` must be a live session; `baseline`, `min_entropy` and
 * `max_entropy` must be writable.
 */
enum GnsrepStatus gnsrep_scan_gauge(const struct GnsrepSession *session,
                                    uintptr_t samples,
                                    uint64_t seed,
                                    double *baseline,
                                    double *min_entropy,
                                    double *max_entropy);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GNSREP_H */

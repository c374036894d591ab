#ifndef TELECLONING_H
#define TELECLONING_H

/* Generated by cbindgen from crates/ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Zero is success.
 */
typedef enum TcStatus {
  TC_STATUS_OK = 0,
  TC_STATUS_NULL_POINTER = 1,
  TC_STATUS_INVALID_ARGUMENT = 2,
  TC_STATUS_DOMAIN = 3,
  TC_STATUS_NOT_PSD = 4,
  TC_STATUS_DEGENERATE = 5,
  TC_STATUS_EXHAUSTED = 6,
  TC_STATUS_PANIC = 7,
} TcStatus;

/**
 * Shared resource between rounds.
 */
typedef struct TcChannel TcChannel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Fresh optimal channel for `receivers` receivers.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum TcStatus tc_channel_new_optimal(size_t receivers, struct TcChannel **out_channel);

/**
 * Fresh channel built from a disentangled resource. `eta_c` holds one
 * value per receiver.
 *
 * # Safety
 * `eta_c` must point to `receivers` doubles; `out_channel` must be valid for writes.
 */
enum TcStatus tc_channel_new_disentangled(double eta_p,
                                          double eta_a,
                                          const double *eta_c,
                                          size_t receivers,
                                          struct TcChannel **out_channel);

/**
 * Run one round at sharpness `lambda`. `accept` has one entry per receiver
 * still present; accepting receivers leave the channel.
 *
 * # Safety
 * `channel` must come from a constructor here; `accept` must point to `n` bools.
 */
enum TcStatus tc_channel_recycle(struct TcChannel *channel,
                                 double lambda,
                                 const bool *accept,
                                 size_t n);

/**
 * Receivers still attached.
 *
 * # Safety
 * Pointers must be valid.
 */
enum TcStatus tc_channel_receiver_count(const struct TcChannel *channel, size_t *out_count);

/**
 * Rounds completed so far.
 *
 * # Safety
 * Pointers must be valid.
 */
enum TcStatus tc_channel_round(const struct TcChannel *channel, size_t *out_round);

/**
 * Average fidelity of receiver `C{receiver}` (1-based) if the next round
 * runs at `lambda`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum TcStatus tc_channel_avg_fidelity(const struct TcChannel *channel,
                                      double lambda,
                                      size_t receiver,
                                      double *out_fidelity);

/**
 * Logarithmic negativity between two groups of slots, each a
 * comma-separated list of names such as `"P"` and `"A1,C1,C2"`. Slots in
 * neither group are traced out.
 *
 * # Safety
 * Strings must be NUL-terminated; pointers must be valid.
 */
enum TcStatus tc_channel_log_negativity(const struct TcChannel *channel,
                                        const char *side_a,
                                        const char *side_b,
                                        double *out_ln);

/**
 * Release a channel. Null is ignored.
 *
 * # Safety
 * `channel` must come from a constructor here and not be used afterwards.
 */
void tc_channel_free(struct TcChannel *channel);

/**
 * `P(λ)`, the per-round attenuation of the fidelity prefactor.
 *
 * # Safety
 * `out_value` must be valid for writes.
 */
enum TcStatus tc_p_kernel(double lambda, double *out_value);

/**
 * Closed-form fidelity of round `n` for the optimal channel, all earlier
 * rounds refused.
 *
 * # Safety
 * `lambdas` must point to `n` doubles; `out_fidelity` must be valid.
 */
enum TcStatus tc_closed_fidelity(size_t receivers,
                                 const double *lambdas,
                                 size_t n,
                                 double *out_fidelity);

/**
 * Maximal attempting number at fidelity floor `f_min`. `eta_p` and `eta_c`
 * (applied to every receiver) are 1 for the optimal state.
 *
 * # Safety
 * `out_man` must be valid for writes.
 */
enum TcStatus tc_man(size_t receivers, double f_min, double eta_p, double eta_c, size_t *out_man);

/**
 * Message for the last failure on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *tc_last_error_message(void);

/**
 * Library version, static storage.
 */
const char *tc_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TELECLONING_H */

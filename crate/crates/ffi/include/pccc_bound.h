#ifndef PCCC_BOUND_H
#define PCCC_BOUND_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PcccStatus {
  PCCC_STATUS_OK = 0,
  PCCC_STATUS_NULL_POINTER = 1,
  PCCC_STATUS_PARSE = 2,
  PCCC_STATUS_INVALID_POLYNOMIAL = 3,
  PCCC_STATUS_DOMAIN = 4,
  PCCC_STATUS_OVERFLOW = 5,
  PCCC_STATUS_LIMIT = 6,
  PCCC_STATUS_PANIC = 7,
} PcccStatus;

/**
 * Constituent RSC code.
 */
typedef struct PcccCode PcccCode;

/**
 * Two codes, their puncturing rows and the interleaver size.
 */
typedef struct PcccConfig PcccConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *pccc_version(void);

/**
 * Message of the last failed call on this thread, or an empty string. The
 * pointer stays valid until the next call into this library on the same
 * thread.
 */
const char *pccc_last_error_message(void);

/**
 * Gaussian tail probability.
 */
double pccc_q_function(double x);

/**
 * Builds a code from octal feedback and feedforward generators.
 *
 * # Safety
 * `feedback` and `feedforward` must be NUL-terminated strings; `out` must be
 * writable.
 */
enum PcccStatus pccc_code_new(const char *feedback, const char *feedforward, struct PcccCode **out);

/**
 * # Safety
 * `code` must come from [`pccc_code_new`] and not have been freed; null is
 * ignored.
 */
void pccc_code_free(struct PcccCode *code);

/**
 * Period `L` of the feedback polynomial.
 *
 * # Safety
 * `code` must be a live handle and `out` writable.
 */
enum PcccStatus pccc_code_period(const struct PcccCode *code, size_t *out);

/**
 * Unpunctured core weight.
 *
 * # Safety
 * `code` must be a live handle and `out` writable.
 */
enum PcccStatus pccc_code_core_weight(const struct PcccCode *code, uint32_t *out);

/**
 * Configuration from explicit puncturing rows given as strings of `0` and
 * `1`.
 *
 * # Safety
 * Code handles must be live, strings NUL-terminated and `out` writable.
 */
enum PcccStatus pccc_config_new(const struct PcccCode *code1,
                                const struct PcccCode *code2,
                                const char *sys,
                                const char *par1,
                                const char *par2,
                                size_t n,
                                struct PcccConfig **out);

/**
 * Symmetric configuration with pseudo-random puncturing; `variant` is `'A'`
 * or `'B'`.
 *
 * # Safety
 * `code` must be a live handle and `out` writable.
 */
enum PcccStatus pccc_config_new_pseudo(const struct PcccCode *code,
                                       char variant,
                                       size_t n,
                                       struct PcccConfig **out);

/**
 * # Safety
 * `config` must come from a `pccc_config_new*` call and not have been
 * freed; null is ignored.
 */
void pccc_config_free(struct PcccConfig *config);

/**
 * Code rate as a reduced fraction.
 *
 * # Safety
 * `config` must be a live handle; both out-pointers writable.
 */
enum PcccStatus pccc_config_rate(const struct PcccConfig *config,
                                 uint64_t *numerator,
                                 uint64_t *denominator);

/**
 * Free effective distance. A catastrophic configuration yields 0 with
 * `catastrophic` set.
 *
 * # Safety
 * `config` must be a live handle; `distance` writable; `catastrophic` may
 * be null.
 */
enum PcccStatus pccc_free_effective_distance(const struct PcccConfig *config,
                                             uint32_t *distance,
                                             bool *catastrophic);

/**
 * Weight-2 bound `P(2)` at `len` SNR points (dB). `values` receives `len`
 * clamped values; `clamped`, if not null, `len` flags.
 *
 * # Safety
 * `config` must be a live handle; `ebn0_db` readable and `values`
 * (and `clamped` when given) writable for `len` elements.
 */
enum PcccStatus pccc_p2(const struct PcccConfig *config,
                        const double *ebn0_db,
                        size_t len,
                        double *values,
                        bool *clamped);

/**
 * Union bound truncated to input weights `2 … w_max` and distances up to
 * `d_max`. `truncated`, if not null, reports whether terms were dropped.
 *
 * # Safety
 * As for [`pccc_p2`]; `truncated` may be null.
 */
enum PcccStatus pccc_truncated_bound(const struct PcccConfig *config,
                                     uint32_t w_max,
                                     uint32_t d_max,
                                     const double *ebn0_db,
                                     size_t len,
                                     double *values,
                                     bool *clamped,
                                     bool *truncated);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PCCC_BOUND_H */

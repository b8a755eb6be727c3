#ifndef KKP_H
#define KKP_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum KkpStatus {
  KKP_STATUS_OK = 0,
  KKP_STATUS_NULL_POINTER = 1,
  KKP_STATUS_INVALID_ARGUMENT = 2,
  KKP_STATUS_PARSE_ERROR = 3,
  KKP_STATUS_INVALID_INSTANCE = 4,
  KKP_STATUS_NO_PACKABLE_ITEMS = 5,
  KKP_STATUS_LIMIT_EXCEEDED = 6,
  KKP_STATUS_OVERFLOW = 7,
  KKP_STATUS_INTERNAL = 8,
} KkpStatus;

/**
 * Solver selector for [`kkp_solve`].
 */
typedef enum KkpAlgorithm {
  KKP_ALGORITHM_EXACT_ENUM = 0,
  KKP_ALGORITHM_EXACT_DP = 1,
  KKP_ALGORITHM_EXACT = 2,
  KKP_ALGORITHM_HALF = 3,
  KKP_ALGORITHM_PTAS = 4,
  KKP_ALGORITHM_FPTAS = 5,
} KkpAlgorithm;

/**
 * Opaque instance handle.
 */
typedef struct KkpInstance KkpInstance;

/**
 * Opaque solve report handle.
 */
typedef struct KkpReport KkpReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or an empty string.
 * The pointer stays valid until the next call on the same thread.
 */
const char *kkp_last_error(void);

/**
 * Builds an instance from `n` profit and weight pairs.
 *
 * # Safety
 * `profits` and `weights` must point to `n` readable values (or be null when
 * `n` is 0) and `out` must be writable.
 */
enum KkpStatus kkp_instance_new(const uint64_t *profits,
                                const uint64_t *weights,
                                size_t n,
                                uint64_t capacity,
                                size_t k,
                                struct KkpInstance **out);

/**
 * Parses an instance in the text or JSON format.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` must be writable.
 */
enum KkpStatus kkp_instance_parse(const char *text, struct KkpInstance **out);

/**
 * Number of items in the instance; 0 for null.
 *
 * # Safety
 * `inst` must be null or a live handle.
 */
size_t kkp_instance_len(const struct KkpInstance *inst);

/**
 * Releases an instance. Null is ignored.
 *
 * # Safety
 * `inst` must be null or a handle not yet freed.
 */
void kkp_instance_free(struct KkpInstance *inst);

/**
 * Solves `inst`. The approximation schemes read ε as `eps_num/eps_den`;
 * the other algorithms ignore it (pass 0/0).
 *
 * # Safety
 * `inst` must be a live handle and `out` must be writable.
 */
enum KkpStatus kkp_solve(const struct KkpInstance *inst,
                         enum KkpAlgorithm alg,
                         uint64_t eps_num,
                         uint64_t eps_den,
                         struct KkpReport **out);

/**
 * Objective value of the returned solution; 0 for null.
 *
 * # Safety
 * `rep` must be null or a live handle.
 */
uint64_t kkp_report_value(const struct KkpReport *rep);

/**
 * Total weight of the returned solution; 0 for null.
 *
 * # Safety
 * `rep` must be null or a live handle.
 */
uint64_t kkp_report_weight(const struct KkpReport *rep);

/**
 * Whether the solution was verified feasible against the input.
 *
 * # Safety
 * `rep` must be null or a live handle.
 */
bool kkp_report_feasible(const struct KkpReport *rep);

/**
 * Number of selected items; 0 for null.
 *
 * # Safety
 * `rep` must be null or a live handle.
 */
size_t kkp_report_len(const struct KkpReport *rep);

/**
 * Copies the selected item ids (ascending) into `buf`, which holds `cap`
 * entries. Fails with `KKP_STATUS_INVALID_ARGUMENT` when `cap` is too small.
 *
 * # Safety
 * `rep` must be a live handle and `buf` must hold `cap` writable entries.
 */
enum KkpStatus kkp_report_items(const struct KkpReport *rep, size_t *buf, size_t cap);

/**
 * Releases a report. Null is ignored.
 *
 * # Safety
 * `rep` must be null or a handle not yet freed.
 */
void kkp_report_free(struct KkpReport *rep);

/**
 * Counts lattice points of the growth construction for ε = `eps_num/eps_den`
 * in dimension `dim`.
 *
 * # Safety
 * `out` must be writable.
 */
enum KkpStatus kkp_count_lattice(uint64_t eps_num, uint64_t eps_den, size_t dim, uint64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KKP_H */

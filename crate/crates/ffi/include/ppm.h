/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef PPM_H
#define PPM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Non-negative values are answers, negative values errors.
 */
typedef enum PpmStatus {
  PPM_STATUS_OK = 0,
  /**
   * The pattern does not occur / the formula is unsatisfiable.
   */
  PPM_STATUS_NO = 1,
  /**
   * The node budget ran out before an answer was found.
   */
  PPM_STATUS_INDETERMINATE = 2,
  PPM_STATUS_NULL_POINTER = -1,
  PPM_STATUS_INVALID_INPUT = -2,
  PPM_STATUS_LIMIT_EXCEEDED = -3,
  PPM_STATUS_BUFFER_TOO_SMALL = -4,
  PPM_STATUS_PANIC = -5,
} PpmStatus;

typedef enum PpmAlgorithm {
  PPM_ALGORITHM_BRUTE = 0,
  PPM_ALGORITHM_BACKTRACK = 1,
  PPM_ALGORITHM_SEPARATOR_DP = 2,
} PpmAlgorithm;

typedef enum PpmComplexity {
  PPM_COMPLEXITY_POLYNOMIAL = 0,
  PPM_COMPLEXITY_NP_COMPLETE = 1,
} PpmComplexity;

/**
 * An owned permutation.
 */
typedef struct PpmPerm PpmPerm;

/**
 * A reduction instance built from a 3-SAT formula.
 */
typedef struct PpmReduction PpmReduction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last error on this thread, or null. The pointer stays
 * valid until the next `ppm_*` call on the same thread.
 */
const char *ppm_last_error(void);

/**
 * Builds a permutation from `len` values (a rearrangement of 1..=len).
 *
 * # Safety
 * `values` must point to `len` readable elements (or be null with
 * `len == 0`); `out` must be writable.
 */
enum PpmStatus ppm_perm_new(const size_t *values, size_t len, struct PpmPerm **out);

/**
 * Parses space-separated values, or a run of single digits.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum PpmStatus ppm_perm_parse(const char *text, struct PpmPerm **out);

/**
 * # Safety
 * `perm` must come from this library and not be freed twice.
 */
void ppm_perm_free(struct PpmPerm *perm);

/**
 * # Safety
 * `perm` must be a live handle or null (which yields 0).
 */
size_t ppm_perm_len(const struct PpmPerm *perm);

/**
 * Copies the values into `buf`, which must hold `ppm_perm_len` entries.
 *
 * # Safety
 * `perm` must be a live handle; `buf` must have room for `cap` elements.
 */
enum PpmStatus ppm_perm_values(const struct PpmPerm *perm, size_t *buf, size_t cap);

/**
 * Decides whether `pattern` occurs in `text`. Returns `Ok` and, when
 * `occurrence` is non-null, writes the 1-based text indices of a witness
 * (`ppm_perm_len(pattern)` entries); returns `No` or `Indeterminate`
 * otherwise. A `node_limit` of 0 means unlimited.
 *
 * # Safety
 * `pattern` and `text` must be live handles; `occurrence` must be null or
 * have room for `ppm_perm_len(pattern)` elements.
 */
enum PpmStatus ppm_contains(const struct PpmPerm *pattern,
                            const struct PpmPerm *text,
                            enum PpmAlgorithm algorithm,
                            uint64_t node_limit,
                            size_t *occurrence);

/**
 * # Safety
 * `out` must be writable.
 */
enum PpmStatus ppm_k_track(size_t k, struct PpmPerm **out);

/**
 * # Safety
 * `out` must be writable.
 */
enum PpmStatus ppm_k_spiral(size_t k, struct PpmPerm **out);

/**
 * # Safety
 * `perm` must be a live handle or null (which yields 0).
 */
size_t ppm_longest_decreasing(const struct PpmPerm *perm);

/**
 * Whether the permutation is skew-merged and avoids 3142.
 *
 * # Safety
 * `perm` must be a live handle or null (which yields false).
 */
bool ppm_in_skew_star(const struct PpmPerm *perm);

/**
 * Complexity of matching patterns from the class avoiding `rho`.
 *
 * # Safety
 * `rho` must be a live handle; `out` must be writable.
 */
enum PpmStatus ppm_classify(const struct PpmPerm *rho, enum PpmComplexity *out);

/**
 * Builds the reduction of a DIMACS 3-CNF formula, twirled if `twirl`.
 *
 * # Safety
 * `dimacs` must be a NUL-terminated string; `out` must be writable.
 */
enum PpmStatus ppm_reduction_from_dimacs(const char *dimacs, bool twirl, struct PpmReduction **out);

/**
 * Borrowed pattern handle, valid while `red` lives. Do not free it.
 *
 * # Safety
 * `red` must be a live handle or null.
 */
const struct PpmPerm *ppm_reduction_pattern(const struct PpmReduction *red);

/**
 * Borrowed text handle, valid while `red` lives. Do not free it.
 *
 * # Safety
 * `red` must be a live handle or null.
 */
const struct PpmPerm *ppm_reduction_text(const struct PpmReduction *red);

/**
 * Decides the formula through the reduction. Returns `Ok` if satisfiable,
 * writing the satisfying assignment to `assignment` when non-null
 * (`cap` must cover the variable count), and `No` otherwise.
 *
 * # Safety
 * `red` must be a live handle; `assignment` must be null or have room for
 * `cap` elements.
 */
enum PpmStatus ppm_reduction_decide(const struct PpmReduction *red, bool *assignment, size_t cap);

/**
 * # Safety
 * `red` must come from this library and not be freed twice.
 */
void ppm_reduction_free(struct PpmReduction *red);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PPM_H */

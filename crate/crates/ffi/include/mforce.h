#ifndef MFORCE_H
#define MFORCE_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum MforceStatus {
  MFORCE_STATUS_OK = 0,
  MFORCE_STATUS_NULL_POINTER = 1,
  MFORCE_STATUS_INVALID_UTF8 = 2,
  MFORCE_STATUS_PARSE = 3,
  MFORCE_STATUS_DIMENSION = 4,
  MFORCE_STATUS_PRECONDITION = 5,
  MFORCE_STATUS_OUT_OF_BOUNDS = 6,
  MFORCE_STATUS_INTERNAL = 7,
} MforceStatus;

typedef enum MforceVariant {
  MFORCE_VARIANT_I2 = 0,
  MFORCE_VARIANT_H2 = 1,
} MforceVariant;

/**
 * Opaque matrix handle.
 */
typedef struct MforceMatrix MforceMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread (empty after success).
 * The pointer is valid until the next `mforce_*` call on this thread.
 */
const char *mforce_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void mforce_string_free(char *s);

/**
 * # Safety
 * `m` must be null or a handle returned by this library, not yet freed.
 */
void mforce_matrix_free(struct MforceMatrix *m);

/**
 * All-zero `rows x cols` matrix.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum MforceStatus mforce_matrix_new(size_t rows, size_t cols, struct MforceMatrix **out);

/**
 * Parses the text format: optional `m n` header, then rows of `0`/`1`.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be a valid pointer.
 */
enum MforceStatus mforce_matrix_parse(const char *text, struct MforceMatrix **out);

/**
 * Text form with header; free with [`mforce_string_free`].
 *
 * # Safety
 * `m` must be a live handle; `out` must be a valid pointer.
 */
enum MforceStatus mforce_matrix_serialize(const struct MforceMatrix *m, char **out);

/**
 * # Safety
 * `m` must be null or a live handle. Returns 0 for null.
 */
size_t mforce_matrix_rows(const struct MforceMatrix *m);

/**
 * # Safety
 * `m` must be null or a live handle. Returns 0 for null.
 */
size_t mforce_matrix_cols(const struct MforceMatrix *m);

/**
 * # Safety
 * `m` must be null or a live handle. Returns 0 for null.
 */
size_t mforce_matrix_ones_count(const struct MforceMatrix *m);

/**
 * # Safety
 * `m` must be a live handle; `out` must be a valid pointer.
 */
enum MforceStatus mforce_matrix_get(const struct MforceMatrix *m,
                                    size_t row,
                                    size_t col,
                                    bool *out);

/**
 * # Safety
 * `m` must be a live handle.
 */
enum MforceStatus mforce_matrix_set(struct MforceMatrix *m, size_t row, size_t col, bool value);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum MforceStatus mforce_matrix_identity(size_t k, struct MforceMatrix **out);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum MforceStatus mforce_matrix_hankel(size_t k, struct MforceMatrix **out);

/**
 * The least `m x n` Q-forcing matrix.
 *
 * # Safety
 * `q` must be a live handle; `out` must be a valid pointer.
 */
enum MforceStatus mforce_minimal_forcing(size_t m,
                                         size_t n,
                                         const struct MforceMatrix *q,
                                         struct MforceMatrix **out);

/**
 * `m(m, n, Q)`, by closed form when one applies and by the minimal
 * construction otherwise.
 *
 * # Safety
 * `q` must be a live handle; `out` must be a valid pointer.
 */
enum MforceStatus mforce_min_ones(size_t m, size_t n, const struct MforceMatrix *q, uint64_t *out);

/**
 * # Safety
 * `a` and `q` must be live handles; `out` must be a valid pointer.
 */
enum MforceStatus mforce_is_forcing(const struct MforceMatrix *a,
                                    const struct MforceMatrix *q,
                                    bool *out);

/**
 * # Safety
 * `a` and `q` must be live handles; `out` must be a valid pointer.
 */
enum MforceStatus mforce_is_strongly_forcing(const struct MforceMatrix *a,
                                             const struct MforceMatrix *q,
                                             bool *out);

/**
 * Looks for an exact copy of `q` in `a` through the 1-entry at
 * `(row, col)`. On success `*found` says whether one exists; if so, the
 * selected rows and columns are written to `rows_out` (length `q` rows) and
 * `cols_out` (length `q` columns).
 *
 * # Safety
 * `a` and `q` must be live handles; `found` must be valid; `rows_out` and
 * `cols_out` must have room for the pattern's row and column counts.
 */
enum MforceStatus mforce_find_witness(const struct MforceMatrix *a,
                                      const struct MforceMatrix *q,
                                      size_t row,
                                      size_t col,
                                      size_t *rows_out,
                                      size_t *cols_out,
                                      bool *found);

/**
 * # Safety
 * `q` must be a live handle; `out` must be a valid pointer.
 */
enum MforceStatus mforce_construct_a_mnq(size_t m,
                                         size_t n,
                                         const struct MforceMatrix *q,
                                         struct MforceMatrix **out);

/**
 * # Safety
 * `q` must be a live handle; `out` must be a valid pointer.
 */
enum MforceStatus mforce_linear_zero_construction(size_t m,
                                                  size_t n,
                                                  const struct MforceMatrix *q,
                                                  struct MforceMatrix **out);

/**
 * `J_n - H_n` for [`MforceVariant::I2`], `J_n - I_n` for
 * [`MforceVariant::H2`]. `variant` is taken as an integer so that
 * out-of-range values are rejected rather than undefined.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum MforceStatus mforce_extremal_2x2(size_t n, uint32_t variant, struct MforceMatrix **out);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum MforceStatus mforce_construct_s(size_t n, struct MforceMatrix **out);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum MforceStatus mforce_construct_t(size_t n, struct MforceMatrix **out);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
enum MforceStatus mforce_construct_s_nk(size_t n, size_t k, struct MforceMatrix **out);

/**
 * Block-diagonal sum of `a` and `b`.
 *
 * # Safety
 * `a` and `b` must be live handles; `out` must be a valid pointer.
 */
enum MforceStatus mforce_direct_sum(const struct MforceMatrix *a,
                                    const struct MforceMatrix *b,
                                    struct MforceMatrix **out);

/**
 * Exact search for `M(n, Q)`. `node_budget` of 0 means unlimited. The
 * outcome is written as JSON (`status`, `best_ones`, `witnesses`,
 * `nodes_explored`, `elapsed_ms`); free it with [`mforce_string_free`].
 *
 * # Safety
 * `q` must be a live handle; `out_json` must be a valid pointer.
 */
enum MforceStatus mforce_search_max_json(size_t n,
                                         const struct MforceMatrix *q,
                                         uint64_t node_budget,
                                         bool enumerate_all_extremal,
                                         char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MFORCE_H */

#ifndef ETF_H
#define ETF_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by all functions.
 */
typedef enum EtfStatus {
  ETF_STATUS_OK = 0,
  /**
   * The input is valid but the property does not hold.
   */
  ETF_STATUS_NEGATIVE = 1,
  ETF_STATUS_INVALID_ARGUMENT = 2,
  ETF_STATUS_PARSE = 3,
  /**
   * A configured size limit was exceeded.
   */
  ETF_STATUS_LIMIT = 4,
  ETF_STATUS_NULL_POINTER = 5,
  ETF_STATUS_BUFFER_TOO_SMALL = 6,
  ETF_STATUS_INTERNAL = 7,
} EtfStatus;

/**
 * Opaque synthesized frame with its validation report.
 */
typedef struct EtfFrame EtfFrame;

/**
 * Opaque cube-root Seidel matrix.
 */
typedef struct EtfMatrix EtfMatrix;

/**
 * Frame parameters; `e` is meaningful only when `has_e` is nonzero.
 */
typedef struct EtfParams {
  int64_t n;
  int64_t k;
  int64_t mu;
  int64_t e;
  uint8_t has_e;
  int64_t lambda1;
  int64_t lambda2;
} EtfParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread; empty after a success.
 * Valid until the next call on the same thread.
 */
const char *etf_last_error_message(void);

/**
 * Parses `.crsm` text.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum EtfStatus etf_matrix_parse(const char *text, struct EtfMatrix **out);

/**
 * The 9×9 signature matrix.
 *
 * # Safety
 * `out` must be writable.
 */
enum EtfStatus etf_matrix_nine(struct EtfMatrix **out);

/**
 * The `m`-fold Kronecker power of the 9×9 matrix, of order `9^m ≤ cap`.
 *
 * # Safety
 * `out` must be writable.
 */
enum EtfStatus etf_matrix_power9(uint32_t m, size_t cap, struct EtfMatrix **out);

/**
 * `(A+I)⊗(B+I)−I` for factors with `μ = −2`.
 *
 * # Safety
 * `a` and `b` must be live handles; `out` must be writable.
 */
enum EtfStatus etf_matrix_tensor(const struct EtfMatrix *a,
                                 const struct EtfMatrix *b,
                                 struct EtfMatrix **out);

/**
 * Standard form (first row and column all ones).
 *
 * # Safety
 * `q` must be a live handle; `out` must be writable.
 */
enum EtfStatus etf_matrix_standard_form(const struct EtfMatrix *q, struct EtfMatrix **out);

/**
 * # Safety
 * `q` must be null or a handle not yet freed.
 */
void etf_matrix_free(struct EtfMatrix *q);

/**
 * Order of `q`, or 0 for a null handle.
 *
 * # Safety
 * `q` must be null or a live handle.
 */
size_t etf_matrix_order(const struct EtfMatrix *q);

/**
 * Entry `(i, j)` as the exponent of ω, or −1 on the diagonal.
 *
 * # Safety
 * `q` must be a live handle; `out` must be writable.
 */
enum EtfStatus etf_matrix_entry(const struct EtfMatrix *q, size_t i, size_t j, int32_t *out);

/**
 * `.crsm` rendering; free with [`etf_string_free`].
 *
 * # Safety
 * `q` must be a live handle; `out` must be writable.
 */
enum EtfStatus etf_matrix_to_crsm(const struct EtfMatrix *q, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void etf_string_free(char *s);

/**
 * Exact check of `Q² = (n−1)I + μQ`; `Negative` when it fails.
 *
 * # Safety
 * `q` must be a live handle; `mu` must be writable.
 */
enum EtfStatus etf_verify_signature(const struct EtfMatrix *q, int64_t *mu);

/**
 * Pairwise-condition check of a nontrivial standard-form matrix.
 *
 * # Safety
 * `q` must be a live handle; `mu` must be writable.
 */
enum EtfStatus etf_verify_via_conditions(const struct EtfMatrix *q, int64_t *mu);

/**
 * Exact parameters from `(n, μ)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum EtfStatus etf_derive_params(int64_t n, int64_t mu, struct EtfParams *out);

/**
 * Admissible parameters for all orders `≤ max_n`. Writes the row count to
 * `len`; returns `BufferTooSmall` without writing rows when `cap` is less.
 *
 * # Safety
 * `buf` must hold `cap` elements (may be null when `cap` is 0); `len` must be writable.
 */
enum EtfStatus etf_feasibility_table(int64_t max_n, struct EtfParams *buf, size_t cap, size_t *len);

/**
 * Checks `.dg` text for e-regularity and the pairwise digraph equations.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `e` must be writable.
 */
enum EtfStatus etf_check_graph(const char *text, size_t *e);

/**
 * Switching equivalence for orders up to the canonicalization bound.
 *
 * # Safety
 * `a` and `b` must be live handles; `out` must be writable.
 */
enum EtfStatus etf_switching_equivalent(const struct EtfMatrix *a,
                                        const struct EtfMatrix *b,
                                        bool *out);

/**
 * Synthesizes and validates the frame of a signature matrix.
 *
 * # Safety
 * `q` must be a live handle; `out` must be writable.
 */
enum EtfStatus etf_frame_synthesize(const struct EtfMatrix *q, struct EtfFrame **out);

/**
 * # Safety
 * `f` must be null or a handle not yet freed.
 */
void etf_frame_free(struct EtfFrame *f);

/**
 * Number of vectors, or 0 for a null handle.
 *
 * # Safety
 * `f` must be null or a live handle.
 */
size_t etf_frame_n(const struct EtfFrame *f);

/**
 * Dimension, or 0 for a null handle.
 *
 * # Safety
 * `f` must be null or a live handle.
 */
size_t etf_frame_k(const struct EtfFrame *f);

/**
 * The constant `c_{n,k}`, or NaN for a null handle.
 *
 * # Safety
 * `f` must be null or a live handle.
 */
double etf_frame_c(const struct EtfFrame *f);

/**
 * 1 when every validation deviation is within tolerance.
 *
 * # Safety
 * `f` must be null or a live handle.
 */
uint8_t etf_frame_passed(const struct EtfFrame *f);

/**
 * Largest validation deviation, or NaN for a null handle.
 *
 * # Safety
 * `f` must be null or a live handle.
 */
double etf_frame_max_deviation(const struct EtfFrame *f);

/**
 * Copies vector `i` into `re[0..k]` and `im[0..k]`.
 *
 * # Safety
 * `f` must be a live handle; `re` and `im` must hold `len` doubles.
 */
enum EtfStatus etf_frame_vector(const struct EtfFrame *f,
                                size_t i,
                                double *re,
                                double *im,
                                size_t len);

/**
 * Frame file JSON; free with [`etf_string_free`].
 *
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum EtfStatus etf_frame_to_json(const struct EtfFrame *f, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ETF_H */

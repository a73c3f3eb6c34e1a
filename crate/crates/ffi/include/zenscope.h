#ifndef ZENSCOPE_H
#define ZENSCOPE_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define ZS_OK 0

#define ZS_ERR_NULL_POINTER 1

#define ZS_ERR_INVALID_ARGUMENT 2

#define ZS_ERR_DIMENSION_MISMATCH 3

#define ZS_ERR_DEGENERATE 4

#define ZS_ERR_INSUFFICIENT_DATA 5

#define ZS_ERR_OPTIMIZER 6

#define ZS_ERR_PROJECTION 7

#define ZS_ERR_LAYOUT 8

#define ZS_ERR_BUFFER_TOO_SMALL 9

#define ZS_ERR_OTHER 10

#define ZS_ERR_PANIC 11

#define ZS_MEASURE_TAU 0

#define ZS_MEASURE_RHO_S 1

#define ZS_MEASURE_LAMBDA_T 2

#define ZS_MEASURE_LAMBDA_EMP 3

#define ZS_CELL_PANEL 0

#define ZS_CELL_SEPARATOR 1

#define ZS_CELL_LABEL 2

#define ZS_CELL_ARROW 3

/**
 * Marks an absent index in [`ZsCell`].
 */
#define ZS_NONE -1

/**
 * Cells of a zenplot layout.
 */
typedef struct ZsLayout ZsLayout;

/**
 * Pseudo-observations of a panel of series.
 */
typedef struct ZsPobs ZsPobs;

/**
 * Ordered groups of variate indices.
 */
typedef struct ZsZenpath ZsZenpath;

typedef struct ZsBivFit {
  double rho;
  double nu;
  double tau_hat;
  double loglik;
  double lambda;
  /**
   * Nonzero when nu sits on the edge of its search interval.
   */
  int32_t nu_at_bound;
} ZsBivFit;

/**
 * One layout cell. Rows and columns are on the fine grid where 2D cells
 * sit at even coordinates.
 */
typedef struct ZsCell {
  /**
   * One of the `ZS_CELL_*` constants.
   */
  uint32_t kind;
  int64_t row;
  int64_t col;
  int64_t group;
  int64_t panel;
  int64_t horizontal;
  int64_t vertical;
  int64_t label;
  /**
   * Arrow direction as `'u'`, `'d'`, `'l'` or `'r'`; 0 otherwise.
   */
  char arrow;
} ZsCell;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *zs_version(void);

/**
 * Message of the last failed call on this thread, or null if none. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *zs_last_error_message(void);

/**
 * Kendall's tau-b of two series of length `n`.
 *
 * # Safety
 * `u` and `v` must point to `n` doubles; `out` must be writable.
 */
int32_t zs_kendall_tau(const double *u, const double *v, size_t n, double *out);

/**
 * Spearman's rho of two series of length `n`.
 *
 * # Safety
 * `u` and `v` must point to `n` doubles; `out` must be writable.
 */
int32_t zs_spearman_rho(const double *u, const double *v, size_t n, double *out);

/**
 * Tail-dependence coefficient of a t copula with correlation `rho` and
 * `nu` degrees of freedom.
 *
 * # Safety
 * `out` must be writable.
 */
int32_t zs_lambda_from_rho_nu(double rho, double nu, double *out);

/**
 * Nonparametric lower-tail dependence of pseudo-observations at corner `p`.
 *
 * # Safety
 * `u` and `v` must point to `n` doubles; `out` must be writable.
 */
int32_t zs_lambda_nonparam(const double *u, const double *v, size_t n, double p, double *out);

/**
 * Fits a bivariate t copula to two columns of pseudo-observations.
 *
 * # Safety
 * `u` and `v` must point to `n` doubles; `out` must be writable.
 */
int32_t zs_fit_biv_t(const double *u, const double *v, size_t n, struct ZsBivFit *out);

/**
 * Pseudo-observations of `cols` series with `rows` observations each.
 * `data` is column-major: series `j` occupies `data[j*rows .. (j+1)*rows]`.
 *
 * # Safety
 * `data` must point to `rows * cols` doubles; `out` must be writable.
 */
int32_t zs_pobs_new(const double *data, size_t rows, size_t cols, struct ZsPobs **out);

/**
 * Number of series held by `pobs`, or 0 for null.
 *
 * # Safety
 * `pobs` must be null or a live handle.
 */
size_t zs_pobs_cols(const struct ZsPobs *pobs);

/**
 * # Safety
 * `pobs` must be null or a handle from [`zs_pobs_new`] not freed before.
 */
void zs_pobs_free(struct ZsPobs *pobs);

/**
 * Pairwise dependence matrix written row-major into `out` (`d * d`
 * doubles, `d = zs_pobs_cols(pobs)`). Pairs that could not be estimated
 * are NaN. `threads = 0` uses every core; the result does not depend on it.
 *
 * # Safety
 * `pobs` must be a live handle; `out` must have room for `d * d` doubles.
 */
int32_t zs_dependence_matrix(const struct ZsPobs *pobs,
                             uint32_t measure_id,
                             size_t threads,
                             double *out);

/**
 * Joint t copula fit. Writes the `d * d` correlation matrix row-major into
 * `p_out` and the degrees of freedom into `nu_out`.
 *
 * # Safety
 * `pobs` must be a live handle; `p_out` must have room for `d * d`
 * doubles and `nu_out` must be writable.
 */
int32_t zs_fit_joint_t(const struct ZsPobs *pobs, double *p_out, double *nu_out);

/**
 * The chain `0, 1, ..., d-1` as a single group.
 *
 * # Safety
 * `out` must be writable.
 */
int32_t zs_zenpath_chain(size_t d, struct ZsZenpath **out);

/**
 * A walk through all `d (d-1) / 2` pairs of `d` variates.
 *
 * # Safety
 * `out` must be writable.
 */
int32_t zs_zenpath_eulerian(size_t d, struct ZsZenpath **out);

/**
 * Builds a zenpath from `n_groups` groups. Group `g` holds
 * `lens[g]` indices, stored back to back in `indices`.
 *
 * # Safety
 * `lens` must point to `n_groups` values and `indices` to their sum;
 * `out` must be writable.
 */
int32_t zs_zenpath_from_groups(const size_t *indices,
                               const size_t *lens,
                               size_t n_groups,
                               struct ZsZenpath **out);

/**
 * # Safety
 * `path` must be null or a live handle.
 */
size_t zs_zenpath_group_count(const struct ZsZenpath *path);

/**
 * Copies group `g` into `buf` (capacity `cap`) and its length into
 * `len_out`. Call with `buf = NULL, cap = 0` to query the length;
 * `ZS_ERR_BUFFER_TOO_SMALL` is returned, with `len_out` set, when
 * `cap` is short.
 *
 * # Safety
 * `path` must be a live handle, `buf` must have room for `cap` values and
 * `len_out` must be writable.
 */
int32_t zs_zenpath_group(const struct ZsZenpath *path,
                         size_t g,
                         size_t *buf,
                         size_t cap,
                         size_t *len_out);

/**
 * # Safety
 * `path` must be null or a handle not freed before.
 */
void zs_zenpath_free(struct ZsZenpath *path);

/**
 * Writes the default zigzag for `n2d` 2D panels at the given `width` as
 * direction letters (`udlr`) plus a terminating NUL into `buf`. The letter
 * count is stored in `len_out`; query it with `buf = NULL, cap = 0`.
 *
 * # Safety
 * `buf` must have room for `cap` bytes and `len_out` must be writable.
 */
int32_t zs_default_zigzag(size_t n2d, size_t width, char *buf, size_t cap, size_t *len_out);

/**
 * Lays out the pairs of `path` along the default zigzag of `width`.
 *
 * # Safety
 * `path` must be a live handle; `out` must be writable.
 */
int32_t zs_layout(const struct ZsZenpath *path, size_t width, struct ZsLayout **out);

/**
 * # Safety
 * `layout` must be null or a live handle.
 */
size_t zs_layout_cell_count(const struct ZsLayout *layout);

/**
 * # Safety
 * `layout` must be a live handle; `out` must be writable.
 */
int32_t zs_layout_cell(const struct ZsLayout *layout, size_t k, struct ZsCell *out);

/**
 * # Safety
 * `layout` must be null or a handle not freed before.
 */
void zs_layout_free(struct ZsLayout *layout);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ZENSCOPE_H */

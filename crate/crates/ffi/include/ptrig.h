#ifndef PTRIG_H
#define PTRIG_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>

typedef enum PtrigStatus {
  PTRIG_STATUS_OK = 0,
  PTRIG_STATUS_NULL_POINTER = 1,
  /**
   * Argument outside the mathematical domain.
   */
  PTRIG_STATUS_DOMAIN = 2,
  /**
   * Convergence, quadrature or bracketing failure.
   */
  PTRIG_STATUS_NUMERICAL = 3,
  /**
   * Internal panic, caught at the boundary.
   */
  PTRIG_STATUS_PANIC = 4,
} PtrigStatus;

typedef enum PtrigCoeffKind {
  /**
   * a_j, sine series of sin_p(π_p x).
   */
  PTRIG_COEFF_KIND_SINE_A = 0,
  /**
   * b_j, cosine series of cos_p(π_p x).
   */
  PTRIG_COEFF_KIND_COSINE_B = 1,
} PtrigCoeffKind;

/**
 * Opaque coefficient table handle.
 */
typedef struct PtrigCoeffTable PtrigCoeffTable;

/**
 * Opaque exponent handle.
 */
typedef struct PtrigExponent PtrigExponent;

typedef struct PtrigEvalConfig {
  double rel_tol;
  double abs_tol;
  size_t max_newton_iters;
  size_t quad_levels;
} PtrigEvalConfig;

typedef struct PtrigCoeff {
  double value;
  double err_est;
} PtrigCoeff;

typedef struct PtrigCriterion {
  double p;
  double b1;
  double tail_computed;
  double tail_remainder_bound;
  size_t cutoff;
  double margin;
  bool holds;
  double err_est;
} PtrigCriterion;

typedef struct PtrigRoot {
  double root;
  double residual;
  double bracket_lo;
  double bracket_hi;
  size_t iterations;
} PtrigRoot;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failing call on this thread, or NULL.
 */
const char *ptrig_last_error(void);

/**
 * Library version, a static NUL-terminated string.
 */
const char *ptrig_version(void);

/**
 * The evaluator defaults.
 */
struct PtrigEvalConfig ptrig_eval_config_default(void);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum PtrigStatus ptrig_exponent_new(double p, struct PtrigExponent **out);

/**
 * # Safety
 * `config` must be readable, `out` valid for writes.
 */
enum PtrigStatus ptrig_exponent_new_with_config(double p,
                                                const struct PtrigEvalConfig *config,
                                                struct PtrigExponent **out);

/**
 * # Safety
 * `handle` must come from `ptrig_exponent_new*` and not be used afterwards.
 * NULL is ignored.
 */
void ptrig_exponent_free(struct PtrigExponent *handle);

/**
 * # Safety
 * `handle` must be a live exponent handle and `out` valid for writes.
 */
enum PtrigStatus ptrig_sin_p(const struct PtrigExponent *handle, double x, double *out);

/**
 * # Safety
 * `handle` must be a live exponent handle and `out` valid for writes.
 */
enum PtrigStatus ptrig_cos_p(const struct PtrigExponent *handle, double x, double *out);

/**
 * Derivative of cos_p.
 *
 * # Safety
 * `handle` must be a live exponent handle and `out` valid for writes.
 */
enum PtrigStatus ptrig_dcos_p(const struct PtrigExponent *handle, double x, double *out);

/**
 * Second derivative of cos_p (x away from the quarter points when p < 2).
 *
 * # Safety
 * `handle` must be a live exponent handle and `out` valid for writes.
 */
enum PtrigStatus ptrig_d2cos_p(const struct PtrigExponent *handle, double x, double *out);

/**
 * Inverse of sin_p on [-1, 1].
 *
 * # Safety
 * `handle` must be a live exponent handle and `out` valid for writes.
 */
enum PtrigStatus ptrig_incomplete_f(const struct PtrigExponent *handle, double y, double *out);

/**
 * # Safety
 * `handle` must be a live exponent handle and `out` valid for writes.
 */
enum PtrigStatus ptrig_u_p(const struct PtrigExponent *handle, double x, double *out);

/**
 * exp_p(iy) = cos_p(y) + i sin_p(y).
 *
 * # Safety
 * `handle` must be a live exponent handle; `re` and `im` valid for writes.
 */
enum PtrigStatus ptrig_exp_p(const struct PtrigExponent *handle, double y, double *re, double *im);

/**
 * # Safety
 * `handle` must be a live exponent handle and `out` valid for writes.
 */
enum PtrigStatus ptrig_exponent_pi_p(const struct PtrigExponent *handle, double *out);

/**
 * # Safety
 * `handle` must be a live exponent handle and `out` valid for writes.
 */
enum PtrigStatus ptrig_m_p(const struct PtrigExponent *handle, double *out);

/**
 * π_p = 2π/(p sin(π/p)).
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum PtrigStatus ptrig_pi_p(double p, double *out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum PtrigStatus ptrig_c_p(double p, double *out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum PtrigStatus ptrig_v_p(double x, double p, double *out);

/**
 * Riemann zeta for real q > 1.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum PtrigStatus ptrig_zeta(double q, double *out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum PtrigStatus ptrig_h(double p, double *out);

/**
 * # Safety
 * `exponent` must be a live exponent handle and `out` valid for writes.
 */
enum PtrigStatus ptrig_coeff_table_new(const struct PtrigExponent *exponent,
                                       enum PtrigCoeffKind kind,
                                       size_t j_max,
                                       struct PtrigCoeffTable **out);

/**
 * # Safety
 * `table` must come from `ptrig_coeff_table_new` and not be used
 * afterwards. NULL is ignored.
 */
void ptrig_coeff_table_free(struct PtrigCoeffTable *table);

/**
 * # Safety
 * `table` must be a live table handle and `out` valid for writes.
 */
enum PtrigStatus ptrig_coeff_table_j_max(const struct PtrigCoeffTable *table, size_t *out);

/**
 * Coefficient `j`; `Domain` outside `first..=j_max` (first is 0 for
 * cosine tables, 1 for sine tables).
 *
 * # Safety
 * `table` must be a live table handle and `out` valid for writes.
 */
enum PtrigStatus ptrig_coeff_table_get(const struct PtrigCoeffTable *table,
                                       size_t j,
                                       struct PtrigCoeff *out);

/**
 * Basis criterion with cutoff `j` (odd, >= 3).
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum PtrigStatus ptrig_basis_criterion(double p, size_t j, struct PtrigCriterion *out);

/**
 * Basis criterion from an existing cosine table.
 *
 * # Safety
 * `table` must be a live table handle and `out` valid for writes.
 */
enum PtrigStatus ptrig_criterion_from_table(const struct PtrigCoeffTable *table,
                                            struct PtrigCriterion *out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum PtrigStatus ptrig_solve_p0(struct PtrigRoot *out);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum PtrigStatus ptrig_solve_p1(struct PtrigRoot *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PTRIG_H */

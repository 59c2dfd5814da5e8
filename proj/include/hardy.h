#ifndef HARDY_H
#define HARDY_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes returned by every call.  On failure hardy_last_error()
 * returns a human-readable message for the calling thread. */
typedef enum {
  HARDY_OK = 0,
  HARDY_EINVAL = 1,  /* bad arguments or violated precondition */
  HARDY_ERUNTIME = 2,
  HARDY_EIO = 3,
} hardy_status;

/* Opaque sampled function on a uniform grid over a box (dim 1 or 2). */
typedef struct hardy_grid hardy_grid;

const char* hardy_last_error(void);

/* --- grids ------------------------------------------------------------- */

/* Sample a closed-form expression (see the expression grammar in the README)
 * on a dim-dimensional grid over [lo, hi] with spacing h. */
hardy_status hardy_grid_create(int dim, const double lo[2], const double hi[2], double h,
                               const char* expr, hardy_grid** out);

/* Same with the default desk-scale box: [-8,8] at h=1/256 (1D),
 * [-4,4]^2 at h=1/64 (2D). */
hardy_status hardy_grid_default(int dim, const char* expr, hardy_grid** out);

hardy_status hardy_grid_load(const char* path, hardy_grid** out);
hardy_status hardy_grid_save(const hardy_grid* g, const char* path);
hardy_status hardy_grid_save_csv(const hardy_grid* g, const char* path);
void hardy_grid_free(hardy_grid* g);

hardy_status hardy_grid_info(const hardy_grid* g, int* dim, double lo[2], double hi[2],
                             double* h, size_t* count);

/* Value at the cell whose center is nearest to x (error if x is outside). */
hardy_status hardy_grid_value_at(const hardy_grid* g, const double x[2], double* out);

/* --- operators ---------------------------------------------------------- */

/* kind: "maximal" (alpha = 0 gives Hardy-Littlewood, alpha > 0 fractional),
 * "ialpha" (Riesz potential, needs 0 < alpha < n), "hilbert" (1D),
 * "riesz0"/"riesz1" (2D Riesz transforms), "radial" (radial maximal
 * function over the default dyadic scale set). */
hardy_status hardy_operator_apply(const hardy_grid* f, const char* kind, double alpha,
                                  hardy_grid** out);

/* --- weights and norms --------------------------------------------------- */

/* cls: "ap" (uses p), "a1", "rhs" (uses s), "rhinf", "apq" (uses p, q).
 * Writes maxLevel+1 values: the constant over the growing dyadic cube family
 * of depth 0..maxLevel.  out must hold maxLevel+1 doubles. */
hardy_status hardy_weight_family_trend(const hardy_grid* w, const char* cls, double p,
                                       double q, double s, int maxLevel, double* out);

/* r_w estimate for a closed-form weight by refinement bisection. */
hardy_status hardy_rw_estimate(int dim, const char* weight_expr, double tol, double* lo,
                               double* hi, double* value, int* indeterminate);

/* (integral |f|^p w)^{1/p}; w may be NULL for Lebesgue measure. */
hardy_status hardy_weighted_norm(const hardy_grid* f, double p, const hardy_grid* w,
                                 double* out);

/* Luxemburg norm of f in L^{p(.)} for a sampled exponent on the same grid. */
hardy_status hardy_luxemburg_norm(const hardy_grid* f, const hardy_grid* exponent,
                                  double* out);

/* --- iteration algorithm -------------------------------------------------- */

/* Runs the iteration Rh = sum_k M^k h / (2B)^k on L^{r(.)} and verifies its
 * four properties.  Writes a CSV table (name,lhs,rhs,pass) into csv (cap
 * bytes, truncating) and sets *all_pass. */
hardy_status hardy_rubio_check(const hardy_grid* h, const hardy_grid* exponent, int kmax,
                               char* csv, size_t cap, int* all_pass);

/* --- check harness -------------------------------------------------------- */

/* Executes every [check] section of the config, writing report/<target>.csv
 * and .svg under report_dir.  summary (cap bytes) receives one
 * "target,verdict" line per check.  *all_pass is 1 iff every verdict is
 * "pass". */
hardy_status hardy_run_config(const char* config_path, const char* report_dir, char* summary,
                              size_t cap, int* all_pass);

#ifdef __cplusplus
}
#endif

#endif /* HARDY_H */

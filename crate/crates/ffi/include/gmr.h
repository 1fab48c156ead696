#ifndef GMR_H
#define GMR_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdint.h>

#define GMR_OK 0

#define GMR_ERR_NULL 1

#define GMR_ERR_DOMAIN 2

#define GMR_ERR_IO 3

#define GMR_ERR_INVALID 4

#define GMR_ERR_NON_FINITE 5

#define GMR_ERR_NUMERICAL 6

#define GMR_ERR_UTF8 7

#define GMR_ERR_PANIC 8

/**
 * Opaque solution family handle.
 */
typedef struct GmrFamily GmrFamily;

typedef struct GmrDerivs {
  double u;
  double u_t;
  double u_x;
  double u_xx;
} GmrDerivs;

typedef struct GmrAiry {
  double ai;
  double aip;
  double bi;
  double bip;
  double est_error;
} GmrAiry;

typedef struct GmrPoint {
  double t;
  double x;
  double u;
} GmrPoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call into the library on the same thread.
 */
const char *gmr_last_error(void);

/**
 * Create a family from JSON such as
 * `{"family":"Inv1","c1":1,"c2":0,"params":{"k":1,"alpha":0,"sigma":1,"lambda":0.5}}`.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
int32_t gmr_family_from_json(const char *json, struct GmrFamily **out);

/**
 * # Safety
 * `f` must come from [`gmr_family_from_json`] and not be used afterwards.
 */
void gmr_family_free(struct GmrFamily *f);

/**
 * # Safety
 * `f` must be a live handle and `out` a valid pointer.
 */
int32_t gmr_family_eval(const struct GmrFamily *f, double t, double x, double *out);

/**
 * # Safety
 * `f` must be a live handle and `out` a valid pointer.
 */
int32_t gmr_family_eval_derivs(const struct GmrFamily *f,
                               double t,
                               double x,
                               struct GmrDerivs *out);

/**
 * `½σ²x²u_xx + kx(α−x)u_x + λx²u − u_t`.
 *
 * # Safety
 * `d` and `out` must be valid pointers.
 */
int32_t gmr_pde_operator(double k,
                         double alpha,
                         double sigma,
                         double lambda,
                         const struct GmrDerivs *d,
                         double x,
                         double *out);

/**
 * # Safety
 * `out` must be a valid pointer.
 */
int32_t gmr_airy(double x, struct GmrAiry *out);

/**
 * Image of `p` under `G_g(ε)` in the symmetric case `α = 0`, `λ = k²/(2σ²)`.
 *
 * # Safety
 * `p` and `out` must be valid pointers.
 */
int32_t gmr_apply_point(double k,
                        double sigma,
                        uint8_t g,
                        double eps,
                        const struct GmrPoint *p,
                        struct GmrPoint *out);

/**
 * Classify `Σ coeffs[i]·V_{i+1}`; writes an owned JSON string to `out`.
 *
 * # Safety
 * `coeffs` must point to six doubles and `out` be a valid pointer. Release
 * the string with [`gmr_string_free`].
 */
int32_t gmr_classify_json(const double *coeffs, double sigma, char **out);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void gmr_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GMR_H */

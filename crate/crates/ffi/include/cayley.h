#ifndef CAYLEY_H
#define CAYLEY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CayleyStatus {
  CAYLEY_STATUS_OK = 0,
  CAYLEY_STATUS_NULL_POINTER = 1,
  CAYLEY_STATUS_INVALID_ARGUMENT = 2,
  CAYLEY_STATUS_PARSE = 3,
  CAYLEY_STATUS_ORDER_CAP = 4,
  CAYLEY_STATUS_NOT_ABELIAN = 5,
  CAYLEY_STATUS_NON_CONVERGENCE = 6,
  CAYLEY_STATUS_DEGENERATE_SPECTRUM = 7,
  CAYLEY_STATUS_BUFFER_TOO_SMALL = 8,
  CAYLEY_STATUS_INTERNAL = 9,
  CAYLEY_STATUS_PANIC = 10,
} CayleyStatus;

typedef enum CayleyMethod {
  CAYLEY_METHOD_DIRECT_REAL = 0,
  CAYLEY_METHOD_DIRECT_COMPLEX = 1,
  CAYLEY_METHOD_BLOCK = 2,
} CayleyMethod;

typedef enum CayleySpencerMethod {
  CAYLEY_SPENCER_METHOD_BRUTE_FORCE = 0,
  CAYLEY_SPENCER_METHOD_RANDOM_BEST_OF_K = 1,
  CAYLEY_SPENCER_METHOD_LOCAL_SEARCH = 2,
  CAYLEY_SPENCER_METHOD_ABELIAN_REDUCTION = 3,
} CayleySpencerMethod;

/**
 * Opaque group handle.
 */
typedef struct CayleyGroup CayleyGroup;

typedef struct CayleyBounds {
  size_t n;
  double sigma;
  double v;
  double w_certificate;
  double s_norm;
  double m;
  double s_star;
} CayleyBounds;

typedef struct CayleyEstimate {
  double mean;
  double std_error;
  size_t trials;
} CayleyEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *cayley_last_error_message(void);

/**
 * Builds a group from a spec string such as `"alt:5"`.
 *
 * # Safety
 * `spec` must be a nul-terminated string and `out` a valid pointer.
 */
enum CayleyStatus cayley_group_new(const char *spec, struct CayleyGroup **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `g` must come from [`cayley_group_new`] and not be used afterwards.
 */
void cayley_group_free(struct CayleyGroup *g);

/**
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum CayleyStatus cayley_group_order(const struct CayleyGroup *g, size_t *out);

/**
 * Index of the product `a·b`.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum CayleyStatus cayley_group_multiply(const struct CayleyGroup *g,
                                        size_t a,
                                        size_t b,
                                        size_t *out);

/**
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum CayleyStatus cayley_group_class_count(const struct CayleyGroup *g, size_t *out);

/**
 * Sorted irreducible degrees. `*len` always receives the number of
 * degrees; if `capacity` is too small nothing is copied and
 * `CAYLEY_STATUS_BUFFER_TOO_SMALL` is returned.
 *
 * # Safety
 * `g` must be a live handle, `len` valid, and `buf` valid for `capacity` writes.
 */
enum CayleyStatus cayley_irrep_degrees(const struct CayleyGroup *g,
                                       size_t *buf,
                                       size_t capacity,
                                       size_t *len);

/**
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum CayleyStatus cayley_bounds(const struct CayleyGroup *g, struct CayleyBounds *out);

/**
 * Monte Carlo estimate of the expected spectral norm.
 *
 * # Safety
 * `g` must be a live handle and `out` a valid pointer.
 */
enum CayleyStatus cayley_estimate_norm(const struct CayleyGroup *g,
                                       enum CayleyMethod method,
                                       size_t trials,
                                       uint64_t seed,
                                       struct CayleyEstimate *out);

/**
 * Searches for a sign vector with small `‖Σ ε_g ρ(g)‖`. `signs` must hold
 * one entry per group element and receives `±1` values; `norm` receives
 * the achieved norm.
 *
 * # Safety
 * `g` must be a live handle, `signs` valid for `capacity` writes and `norm` valid.
 */
enum CayleyStatus cayley_spencer(const struct CayleyGroup *g,
                                 enum CayleySpencerMethod method,
                                 size_t budget,
                                 uint64_t seed,
                                 int8_t *signs,
                                 size_t capacity,
                                 double *norm);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CAYLEY_H */

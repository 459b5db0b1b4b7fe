#ifndef HYPMAASS_H
#define HYPMAASS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum HmStatus {
  HM_STATUS_OK = 0,
  HM_STATUS_NULL_POINTER = 1,
  HM_STATUS_INVALID_ARGUMENT = 2,
  HM_STATUS_NOT_CONVERGED = 3,
  HM_STATUS_NUMERICAL = 4,
  HM_STATUS_PANIC = 5,
} HmStatus;

// Which sum `hm_series_eval` returns.
typedef enum HmTarget {
  HM_TARGET_F = 0,
  HM_TARGET_OMEGA = 1,
  HM_TARGET_HOLOMORPHIC = 2,
  HM_TARGET_F_PRIME = 3,
} HmTarget;

// Which theta kernel `hm_kernel_new` builds.
typedef enum HmKernelKind {
  HM_KERNEL_KIND_OMEGA = 0,
  HM_KERNEL_KIND_LAMBDA = 1,
} HmKernelKind;

// Precomputed theta kernel coefficients at a fixed `z`.
typedef struct HmKernel HmKernel;

// Series parameters `(k, D, tol)`.
typedef struct HmSeries HmSeries;

// A complex value with a bound on its truncation error.
typedef struct HmValue {
  double re;
  double im;
  double error_bound;
} HmValue;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null.
// The pointer stays valid until the next call on this thread.
const char *hm_last_error_message(void);

// Frees a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be freed twice.
void hm_string_free(char *s);

// Creates series parameters. `k` even and at least 4, `d` a non-square discriminant.
//
// # Safety
// `out` must be a valid pointer.
enum HmStatus hm_series_new(uint32_t k, int64_t d, double tol, struct HmSeries **out);

// Releases a series handle. Null is ignored.
//
// # Safety
// `h` must come from `hm_series_new` and not be freed twice.
void hm_series_free(struct HmSeries *h);

// Evaluates one of the sums at `x + iy`.
//
// # Safety
// `h` and `out` must be valid pointers.
enum HmStatus hm_series_eval(const struct HmSeries *h,
                             enum HmTarget target,
                             double x,
                             double y,
                             struct HmValue *out);

// Builds kernel coefficients for `D <= d_max` at `z = zx + i zy`, accurate
// to `tol` for all `Im τ >= v_min`.
//
// # Safety
// `out` must be a valid pointer.
enum HmStatus hm_kernel_new(enum HmKernelKind kind,
                            uint32_t k,
                            double zx,
                            double zy,
                            int64_t d_max,
                            double v_min,
                            double tol,
                            struct HmKernel **out);

// Releases a kernel handle. Null is ignored.
//
// # Safety
// `h` must come from `hm_kernel_new` and not be freed twice.
void hm_kernel_free(struct HmKernel *h);

// The coefficient of `e(Dτ)`. Zero for indices that are not discriminants.
//
// # Safety
// `h` and `out` must be valid pointers.
enum HmStatus hm_kernel_coefficient(const struct HmKernel *h, int64_t d, struct HmValue *out);

// The truncated kernel at `τ = u + iv`.
//
// # Safety
// `h` and `out` must be valid pointers.
enum HmStatus hm_kernel_eval(const struct HmKernel *h, double u, double v, struct HmValue *out);

// Runs a verification suite and writes its JSON report to `*out_json`
// (free with `hm_string_free`). `*out_passed` is 1 if every check passed.
//
// # Safety
// `suite` must be a NUL-terminated string; `out_json` and `out_passed` valid pointers.
enum HmStatus hm_verify(const char *suite, uint64_t seed, char **out_json, int32_t *out_passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HYPMAASS_H */

#ifndef CRINV_H
#define CRINV_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes.
 */
typedef enum CrinvStatus {
  CRINV_STATUS_OK = 0,
  CRINV_STATUS_NULL_POINTER = 1,
  CRINV_STATUS_INVALID_UTF8 = 2,
  CRINV_STATUS_PARSE_ERROR = 3,
  CRINV_STATUS_PRECONDITION_FAILED = 4,
  CRINV_STATUS_DOMAIN_ERROR = 5,
  CRINV_STATUS_NON_CONVERGENCE = 6,
  CRINV_STATUS_INVALID_JSON = 7,
  CRINV_STATUS_IO_ERROR = 8,
  CRINV_STATUS_PANIC = 9,
} CrinvStatus;

/*
 Opaque polynomial handle.
 */
typedef struct CrinvPolynomial CrinvPolynomial;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Parses a defining equation in `n` complex variables.

 # Safety
 `text` must be a NUL-terminated string; `out` must be writable.
 */
enum CrinvStatus crinv_polynomial_parse(const char *text,
                                        uintptr_t n,
                                        struct CrinvPolynomial **out);

/*
 Builds a polynomial from its JSON serialization.

 # Safety
 `json` must be a NUL-terminated string; `out` must be writable.
 */
enum CrinvStatus crinv_polynomial_from_json(const char *json, struct CrinvPolynomial **out);

/*
 Releases a handle; null is ignored.

 # Safety
 `p` must come from this library and not be used afterwards.
 */
void crinv_polynomial_free(struct CrinvPolynomial *p);

/*
 JSON serialization with exact `p/q` coefficients.

 # Safety
 `p` must be a live handle; `out` must be writable.
 */
enum CrinvStatus crinv_polynomial_to_json(const struct CrinvPolynomial *p, char **out);

/*
 Writes 1 when the polynomial is real valued, 0 otherwise.

 # Safety
 `p` must be a live handle; `out` must be writable.
 */
enum CrinvStatus crinv_polynomial_is_real_valued(const struct CrinvPolynomial *p, int32_t *out);

/*
 Releases a string returned by this library; null is ignored.

 # Safety
 `s` must come from this library and not be used afterwards.
 */
void crinv_string_free(char *s);

/*
 Convexity threshold γ for even `l` with `2 ≤ l ≤ k`. `out_branch` receives
 0 for the rational branch and 1 for the radical branch.

 # Safety
 Output pointers must be writable.
 */
enum CrinvStatus crinv_gamma(uint32_t l, uint32_t k, double *out_value, int32_t *out_branch);

/*
 Convexity of `|z|^k + a|z|^(k−l) Re z^l` with `a = a_num / a_den`.
 `out_convexifiable` receives 1, 0, or −1 when undetermined (`l` divides `k`).

 # Safety
 Output pointers must be writable.
 */
enum CrinvStatus crinv_model_convexity(uint32_t k,
                                       uint32_t l,
                                       int64_t a_num,
                                       int64_t a_den,
                                       int32_t *out_convex,
                                       int32_t *out_convexifiable);

/*
 Planar report as JSON (n = 1 hypersurfaces).

 # Safety
 `p` must be a live handle; `out` must be writable.
 */
enum CrinvStatus crinv_classify_json(const struct CrinvPolynomial *p, char **out);

/*
 Multitype result as JSON.

 # Safety
 `p` must be a live handle; `out` must be writable.
 */
enum CrinvStatus crinv_multitype_json(const struct CrinvPolynomial *p,
                                      bool permute,
                                      uint64_t max_denominator,
                                      char **out);

/*
 Kohn-Nirenberg report for a homogeneous polynomial of degree `m`.
 `grid = 0` selects the default grid.

 # Safety
 `p` must be a live handle; `out` must be writable.
 */
enum CrinvStatus crinv_kn_report_json(const struct CrinvPolynomial *p,
                                      uint32_t m,
                                      uintptr_t grid,
                                      uintptr_t refinements,
                                      double tol,
                                      char **out);

/*
 Message of the last failure on this thread; valid until the next call into the library.
 */
const char *crinv_last_error_message(void);

/*
 Library version, statically allocated.
 */
const char *crinv_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CRINV_H */

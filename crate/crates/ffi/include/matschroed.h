#ifndef MATSCHROED_H
#define MATSCHROED_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status codes; zero is success.
 */
enum MsStatus
#ifdef __cplusplus
  : int32_t
#endif // __cplusplus
 {
  MS_STATUS_OK = 0,
  MS_STATUS_NULL_POINTER = 1,
  MS_STATUS_PARAMETER = 2,
  MS_STATUS_DOMAIN = 3,
  MS_STATUS_RANGE = 4,
  MS_STATUS_NUMERIC = 5,
  MS_STATUS_CONSISTENCY = 6,
  MS_STATUS_PARSE = 7,
  MS_STATUS_IO = 8,
  MS_STATUS_PANIC = 9,
};
#ifndef __cplusplus
typedef int32_t MsStatus;
#endif // __cplusplus

/*
 A built family: `Φ_n`, `Φ̃_n`, norms for `n ≤ n_max`.
 */
typedef struct MsFamily MsFamily;

/*
 A matrix polynomial times `e^{-x²/2}`.
 */
typedef struct MsGaussian MsGaussian;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Copies the last error message of this thread into `buf` (NUL-terminated,
 truncated to `len`). Returns the full message length, 0 if none.

 # Safety
 `buf` must be null or valid for `len` bytes.
 */
size_t ms_last_error(char *buf, size_t len);

/*
 Builds a family of `kind` (1 or 2), size `size` and `size - 1`
 parameters `nu`. `quad_order = 0` selects the automatic order.

 # Safety
 `nu` must be valid for `size - 1` reads (may be null when `size == 1`);
 `out` must be writable.
 */
MsStatus ms_family_new(uint8_t kind,
                       size_t size,
                       const double *nu,
                       size_t n_max,
                       size_t quad_order,
                       struct MsFamily **out);

/*
 Builds a family from `{"kind":k,"N":n,"nu":[…]}`.

 # Safety
 `json` must be a NUL-terminated string; `out` must be writable.
 */
MsStatus ms_family_from_json(const char *json,
                             size_t n_max,
                             size_t quad_order,
                             struct MsFamily **out);

/*
 # Safety
 `family` must be null or a handle from this library, not yet freed.
 */
void ms_family_free(struct MsFamily *family);

/*
 Matrix size `N`, or 0 for a null handle.

 # Safety
 `family` must be null or a live handle.
 */
size_t ms_family_size(const struct MsFamily *family);

/*
 Largest available index, or 0 for a null handle.

 # Safety
 `family` must be null or a live handle.
 */
size_t ms_family_n_max(const struct MsFamily *family);

/*
 `Φ_n`, or `Φ̃_n` when `normalized` is true, as a new handle.

 # Safety
 `family` must be a live handle; `out` must be writable.
 */
MsStatus ms_family_phi(const struct MsFamily *family,
                       size_t n,
                       bool normalized,
                       struct MsGaussian **out);

/*
 Diagonal of `⟨P_n, P_n⟩_W` into `out` (length `N`).

 # Safety
 `family` must be a live handle; `out` valid for `N` writes.
 */
MsStatus ms_family_norm(const struct MsFamily *family, size_t n, double *out);

/*
 `(x^k I)_{nm}`, row-major into `re` and `im`.

 # Safety
 `family` must be a live handle; `re`, `im` valid for `N*N` writes.
 */
MsStatus ms_family_matrix_element(const struct MsFamily *family,
                                  uint32_t k,
                                  size_t n,
                                  size_t m,
                                  double *re,
                                  double *im);

/*
 Entry `(i, j)` (0-based) of `Φ̃_n Φ̃_n*` at `x`.

 # Safety
 `family` must be a live handle; `out` writable.
 */
MsStatus ms_family_density(const struct MsFamily *family,
                           size_t n,
                           size_t i,
                           size_t j,
                           double x,
                           double *out);

/*
 Runs every identity suite. `tol <= 0` keeps the per-suite defaults.
 Writes the number of suites and of failures; a failed suite is not an
 error status.

 # Safety
 `family` must be a live handle; `total` and `failed` writable.
 */
MsStatus ms_family_check(const struct MsFamily *family, double tol, size_t *total, size_t *failed);

/*
 Parses the JSON function format.

 # Safety
 `json` NUL-terminated; `out` writable.
 */
MsStatus ms_gaussian_from_json(const char *json, struct MsGaussian **out);

/*
 Serializes to the JSON function format; free the string with
 [`ms_string_free`].

 # Safety
 `g` must be a live handle; `out` writable.
 */
MsStatus ms_gaussian_to_json(const struct MsGaussian *g, char **out);

/*
 # Safety
 `s` must be null or a string returned by this library, not yet freed.
 */
void ms_string_free(char *s);

/*
 # Safety
 `g` must be null or a live handle.
 */
void ms_gaussian_free(struct MsGaussian *g);

/*
 Matrix size, or 0 for a null handle.

 # Safety
 `g` must be null or a live handle.
 */
size_t ms_gaussian_size(const struct MsGaussian *g);

/*
 Polynomial degree, or 0 for a null handle.

 # Safety
 `g` must be null or a live handle.
 */
size_t ms_gaussian_degree(const struct MsGaussian *g);

/*
 Value at `x`, row-major into `re` and `im`.

 # Safety
 `g` must be a live handle; `re`, `im` valid for `N*N` writes.
 */
MsStatus ms_gaussian_eval(const struct MsGaussian *g, double x, double *re, double *im);

/*
 `F_k` applied to `g` (or its inverse), as a new handle.

 # Safety
 `g` must be a live handle; `out` writable.
 */
MsStatus ms_gaussian_transform(const struct MsGaussian *g,
                               int64_t k,
                               bool inverse,
                               struct MsGaussian **out);

/*
 Max-norm coefficient distance between two functions of equal size.

 # Safety
 `a`, `b` live handles; `out` writable.
 */
MsStatus ms_gaussian_distance(const struct MsGaussian *a, const struct MsGaussian *b, double *out);

/*
 Normalized Hermite function `ψ_n(x)`.
 */
double ms_wave_function(size_t n, double x);

/*
 Library version, static NUL-terminated string.
 */
const char *ms_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MATSCHROED_H */

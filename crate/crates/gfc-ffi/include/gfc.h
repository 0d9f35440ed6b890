#ifndef GFC_H
#define GFC_H

/* Generated by cbindgen from the gfc-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes returned by every entry point.
typedef enum GfcStatus {
  GFC_STATUS_OK = 0,
  GFC_STATUS_INVALID_ARGUMENT = 1,
  GFC_STATUS_BUDGET_EXCEEDED = 2,
  GFC_STATUS_VERIFICATION_FAILED = 3,
  GFC_STATUS_INTERNAL = 4,
} GfcStatus;

// Opaque handle to a built weight slice.
typedef struct GfcSlice GfcSlice;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Builds the weight slice of one algebra variant.
//
// `variant`: 0 for the degree-≥-1 algebra (slots 1, 3, 4, …), 1 for the
// degree-≥-2 algebra (slots 3, 4, …). `budget_dim` of 0 selects the
// default cap (200000).
//
// # Safety
// `out` must point to writable memory for one pointer.
enum GfcStatus gfc_slice_build(int variant,
                               int64_t weight,
                               uint64_t budget_dim,
                               struct GfcSlice **out);

// Releases a slice handle. Passing NULL is a no-op.
//
// # Safety
// `handle` must come from `gfc_slice_build` and not have been freed.
void gfc_slice_free(struct GfcSlice *handle);

// Largest degree the slice carries.
//
// # Safety
// `handle` must be a live slice handle; `out` must be writable.
enum GfcStatus gfc_slice_max_degree(const struct GfcSlice *handle, uint64_t *out);

// Cochain dimension at one degree (0 beyond the computed range).
//
// # Safety
// `handle` must be a live slice handle; `out` must be writable.
enum GfcStatus gfc_slice_dim(const struct GfcSlice *handle, uint64_t degree, uint64_t *out);

// Betti number at one degree.
//
// # Safety
// `handle` must be a live slice handle; `out` must be writable.
enum GfcStatus gfc_slice_betti(const struct GfcSlice *handle, uint64_t degree, uint64_t *out);

// Euler characteristic Σ (−1)^d dim Cᵈ of the slice.
//
// # Safety
// `handle` must be a live slice handle; `out` must be writable.
enum GfcStatus gfc_slice_euler_characteristic(const struct GfcSlice *handle, int64_t *out);

// Full slice dump (degrees, profiles, coboundaries) as a JSON string.
//
// # Safety
// `handle` must be a live slice handle; `out` receives a string that the
// caller must free with `gfc_string_free`.
enum GfcStatus gfc_slice_to_json(const struct GfcSlice *handle, char **out);

// Euler-characteristic series by the constant-term product formula as a
// JSON string. `full` nonzero selects the series including t^-2 (n = 1
// only).
//
// # Safety
// `out` receives a string to free with `gfc_string_free`.
enum GfcStatus gfc_euler_series_json(uint32_t n, int64_t tmax, int full, char **out);

// Chain-level Euler series (the independent oracle), n = 1.
//
// # Safety
// `out` receives a string to free with `gfc_string_free`.
enum GfcStatus gfc_complex_euler_series_json(int variant, int64_t tmax, char **out);

// Runs the factorization pipeline and returns its JSON report.
// `VerificationFailed` means the report was produced but a check failed.
//
// # Safety
// `out` receives a string to free with `gfc_string_free`.
enum GfcStatus gfc_factorize_json(char **out);

// Runs a named verification suite ("tables", "gkf", "main-theorem",
// "genfun", "properties", "all") and returns the reports as JSON.
// `VerificationFailed` means some check failed.
//
// # Safety
// `suite` must be a NUL-terminated string; `out` receives a string to
// free with `gfc_string_free`.
enum GfcStatus gfc_verify_json(const char *suite, char **out);

// Releases a string returned by this library. Passing NULL is a no-op.
//
// # Safety
// `s` must have been returned by this library and not yet freed.
void gfc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GFC_H */

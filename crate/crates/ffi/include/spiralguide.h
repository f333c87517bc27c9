#ifndef SPIRALGUIDE_H
#define SPIRALGUIDE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SgStatus {
  SG_STATUS_OK = 0,
  SG_STATUS_NULL_POINTER = 1,
  SG_STATUS_INVALID_UTF8 = 2,
  // Malformed or inconsistent JSON input.
  SG_STATUS_CONFIG = 3,
  // θ outside the spiral's domain, or a width that does not exist there.
  SG_STATUS_GEOMETRY = 4,
  // Factorization or eigensolver failure.
  SG_STATUS_SOLVER = 5,
  SG_STATUS_OUT_OF_RANGE = 6,
  // The requested quantity is not defined for this input.
  SG_STATUS_UNAVAILABLE = 7,
  SG_STATUS_PANIC = 8,
} SgStatus;

// Result of a spectrum solve.
typedef struct SgSpectrum SgSpectrum;

// A validated spiral curve.
typedef struct SgSpiral SgSpiral;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL if none failed.
// The string stays valid until the next failing call on the same thread.
const char *sg_last_error(void);

// Library version as a static NUL-terminated string.
const char *sg_version(void);

// Parses a spiral specification such as
// `{"family": "archimedean", "a": 0.5, "beta": 10.5}`.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a writable pointer.
enum SgStatus sg_spiral_from_json(const char *json, struct SgSpiral **out);

// # Safety
// `spiral` must come from [`sg_spiral_from_json`] and not be used afterwards.
void sg_spiral_free(struct SgSpiral *spiral);

// Polar radius r(θ).
//
// # Safety
// `spiral` must be a live handle and `out` writable.
enum SgStatus sg_spiral_radius(const struct SgSpiral *spiral, double theta, double *out);

// Signed curvature κ(θ).
//
// # Safety
// `spiral` must be a live handle and `out` writable.
enum SgStatus sg_spiral_curvature(const struct SgSpiral *spiral, double theta, double *out);

// Arc length from θ_min to θ.
//
// # Safety
// `spiral` must be a live handle and `out` writable.
enum SgStatus sg_spiral_arc_length(const struct SgSpiral *spiral, double theta, double *out);

// Width function (m/2π)(r(θ) − r(θ − 2π/m)).
//
// # Safety
// `spiral` must be a live handle and `out` writable.
enum SgStatus sg_spiral_width(const struct SgSpiral *spiral, double theta, double *out);

// Distance along the inward normal at θ to the previous coil.
//
// # Safety
// `spiral` must be a live handle and `out` writable.
enum SgStatus sg_spiral_orthogonal_width(const struct SgSpiral *spiral, double theta, double *out);

// Solves for the spectrum described by a JSON run configuration (the same
// format the command-line tool reads).
//
// # Safety
// `config_json` must be a NUL-terminated string and `out` writable.
enum SgStatus sg_spectrum_solve(const char *config_json, struct SgSpectrum **out);

// # Safety
// `spectrum` must come from [`sg_spectrum_solve`] and not be used afterwards.
void sg_spectrum_free(struct SgSpectrum *spectrum);

// Number of computed eigenvalues; 0 for a NULL handle.
//
// # Safety
// `spectrum` must be NULL or a live handle.
uintptr_t sg_spectrum_len(const struct SgSpectrum *spectrum);

// Eigenvalue `index` (0-based, ascending).
//
// # Safety
// `spectrum` must be a live handle and `out` writable.
enum SgStatus sg_spectrum_eigenvalue(const struct SgSpectrum *spectrum,
                                     uintptr_t index,
                                     double *out);

// Relative residual of eigenpair `index` (0-based).
//
// # Safety
// `spectrum` must be a live handle and `out` writable.
enum SgStatus sg_spectrum_residual(const struct SgSpectrum *spectrum, uintptr_t index, double *out);

// Bottom of the essential spectrum; `SG_STATUS_UNAVAILABLE` when it is not a
// finite positive number.
//
// # Safety
// `spectrum` must be a live handle and `out` writable.
enum SgStatus sg_spectrum_threshold(const struct SgSpectrum *spectrum, double *out);

// Number of degrees of freedom of the discretisation.
//
// # Safety
// `spectrum` must be NULL or a live handle.
uintptr_t sg_spectrum_dof(const struct SgSpectrum *spectrum);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPIRALGUIDE_H */

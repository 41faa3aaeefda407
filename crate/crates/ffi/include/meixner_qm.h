#ifndef MEIXNER_QM_H
#define MEIXNER_QM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MqmStatus {
  MQM_STATUS_OK = 0,
  MQM_STATUS_NULL_POINTER = 1,
  MQM_STATUS_INVALID_ARGUMENT = 2,
  MQM_STATUS_DOMAIN = 3,
  MQM_STATUS_SIZE = 4,
  MQM_STATUS_ACCURACY = 5,
  MQM_STATUS_SINGULARITY = 6,
  MQM_STATUS_INTERNAL = 7,
} MqmStatus;

// A basis family together with Meixner parameters and energy scale.
typedef struct MqmSystem MqmSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failing call on this thread; empty after a success.
// The pointer stays valid until the next call into this library on the
// same thread.
const char *mqm_last_error(void);

// Sine box on `[0, a]`. `c = 0` selects `c = (pi/a)^2`.
//
// # Safety
// `out` must point to writable storage for one pointer.
enum MqmStatus mqm_system_new_sine_box(double a,
                                       double mu,
                                       double theta,
                                       double c,
                                       struct MqmSystem **out);

// Gegenbauer box on `[-a/2, a/2]` with the `V0/cos^2(pi x/a)` part split off.
// `c = 0` selects `c = (pi/a)^2`.
//
// # Safety
// `out` must point to writable storage for one pointer.
enum MqmStatus mqm_system_new_gegenbauer_box(double a,
                                             double v0,
                                             double mu,
                                             double theta,
                                             double c,
                                             struct MqmSystem **out);

// Hermite functions of `sqrt(v0) x`. `c = 0` selects `c = v0`.
//
// # Safety
// `out` must point to writable storage for one pointer.
enum MqmStatus mqm_system_new_hermite_line(double v0,
                                           double mu,
                                           double theta,
                                           double c,
                                           struct MqmSystem **out);

// Radial Laguerre basis with angular momentum `ell`. `c = 0` selects
// `c = lambda^2`.
//
// # Safety
// `out` must point to writable storage for one pointer.
enum MqmStatus mqm_system_new_laguerre_radial(double lambda,
                                              uint32_t ell,
                                              double mu,
                                              double theta,
                                              double c,
                                              struct MqmSystem **out);

// Releases a system. Null is ignored.
//
// # Safety
// `sys` must be null or a handle from an `mqm_system_new_*` call that has
// not been freed.
void mqm_system_free(struct MqmSystem *sys);

// Energy scale `c` of the system.
//
// # Safety
// `sys` must be a live handle and `out` writable.
enum MqmStatus mqm_energy_scale(const struct MqmSystem *sys, double *out);

// `E_k = c sinh(theta) (k + mu)`.
//
// # Safety
// `sys` must be a live handle and `out` writable.
enum MqmStatus mqm_energy(const struct MqmSystem *sys, size_t k, double *out);

// Orthonormal Meixner polynomial `M_n(k)` and its absolute error estimate.
// `est_error` may be null.
//
// # Safety
// `value` must be writable; `est_error` null or writable.
enum MqmStatus mqm_meixner(double mu,
                           double theta,
                           size_t n,
                           size_t k,
                           double *value,
                           double *est_error);

// Discrete weight `rho(k)`.
//
// # Safety
// `out` must be writable.
enum MqmStatus mqm_weight(double mu, double theta, size_t k, double *out);

// Fills the `n x n` tridiagonal Hamiltonian: `diag` gets `n` values, `off`
// gets `n - 1`.
//
// # Safety
// `diag` and `off` must hold `n` and `n - 1` writable doubles.
enum MqmStatus mqm_hamiltonian(const struct MqmSystem *sys, size_t n, double *diag, double *off);

// Fills the `n x n` kinetic matrix in row-major order (the diagonal `T~`
// for the Gegenbauer and Hermite systems).
//
// # Safety
// `out` must hold `n * n` writable doubles.
enum MqmStatus mqm_kinetic_matrix(const struct MqmSystem *sys, size_t n, double *out);

// Basis function `phi_n(x)`.
//
// # Safety
// `sys` must be a live handle and `out` writable.
enum MqmStatus mqm_basis_eval(const struct MqmSystem *sys, size_t n, double x, double *out);

// Potential reconstructed from `terms` basis functions at `len` strictly
// increasing interior points. `column < 0` selects the per-point automatic
// column. Split-off analytic parts are restored; the orbital term is not
// included. Points whose denominator is too small get `valid[i] = 0` and a
// NaN value.
//
// # Safety
// `xs` must hold `len` readable doubles, `vals` and `valid` `len` writable
// elements.
enum MqmStatus mqm_reconstruct_potential(const struct MqmSystem *sys,
                                         size_t terms,
                                         int64_t column,
                                         const double *xs,
                                         size_t len,
                                         double *vals,
                                         uint8_t *valid);

// Bound state `psi_k` from `terms` Meixner coefficients at `len` points.
//
// # Safety
// `xs` must hold `len` readable doubles and `out` `len` writable doubles.
enum MqmStatus mqm_state_eval(const struct MqmSystem *sys,
                              size_t k,
                              size_t terms,
                              const double *xs,
                              size_t len,
                              double *out);

// Library version as a static NUL-terminated string.
const char *mqm_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MEIXNER_QM_H */

#ifndef UNRUH_DECOHERENCE_H
#define UNRUH_DECOHERENCE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum UdStatus {
  UD_STATUS_OK = 0,
  UD_STATUS_NULL_POINTER = 1,
  UD_STATUS_DOMAIN_ERROR = 2,
  UD_STATUS_NUMERIC_ERROR = 3,
  UD_STATUS_INVALID_ARGUMENT = 4,
  UD_STATUS_PANIC = 5,
} UdStatus;

/**
 * Values accepted by the `method` argument of `ud_phase_variance`.
 */
typedef enum UdMethod {
  UD_METHOD_CLOSED = 0,
  UD_METHOD_EXACT = 1,
} UdMethod;

/**
 * Opaque: unit system and last error message.
 */
typedef struct UdContext UdContext;

/**
 * Opaque: a configured Monte Carlo ensemble.
 */
typedef struct UdEnsemble UdEnsemble;

typedef struct UdKinematicState {
  double tau;
  double gamma;
  double velocity;
  double speed_abs;
  double x;
  uint32_t segment;
} UdKinematicState;

typedef struct UdDecoherenceResult {
  double delta_phi_sq;
  double delta_phi_tot;
  double x;
  double theta1;
  double prefactor;
  double clausius_mossotti;
  bool dipole_ok;
  bool kr_small;
  bool horizon_ok;
  bool unruh_regime;
} UdDecoherenceResult;

typedef struct UdMirrorReport {
  double alpha_sq;
  double rate;
  double ra_over_c2;
  double bound_exact;
  double bound_estimate;
  bool coherent_exact;
  bool coherent_estimate;
  bool high_velocity;
} UdMirrorReport;

typedef struct UdMcResult {
  double mean_dp_sq;
  double std_error;
  double analytic;
  double z_score;
  double mean_events;
} UdMcResult;

typedef struct UdPhaseWalkResult {
  double phase_std;
  double prediction;
  /**
   * NaN when nothing scatters.
   */
  double phase_ratio;
  double theory_ratio;
} UdPhaseWalkResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * New context in SI units, or `c = ħ = k_B = 1` when `natural_units`.
 */
struct UdContext *ud_context_new(bool natural_units);

/**
 * New context with custom constants; NULL unless all three are positive.
 */
struct UdContext *ud_context_new_custom(double c, double hbar, double kb);

/**
 * # Safety
 * `ctx` must be null or a pointer from `ud_context_new*` not yet freed.
 */
void ud_context_free(struct UdContext *ctx);

/**
 * Last error message, empty after a successful call. Owned by `ctx`.
 *
 * # Safety
 * `ctx` must be null or a live context.
 */
const char *ud_context_last_error(const struct UdContext *ctx);

const char *ud_version(void);

/**
 * # Safety
 * `ctx` must be a live context and `out` a valid pointer to a double.
 */
enum UdStatus ud_unruh_temperature(struct UdContext *ctx, double a, double *out);

/**
 * # Safety
 * `ctx` must be a live context and `out` a valid pointer to a double.
 */
enum UdStatus ud_tau1(struct UdContext *ctx, double a, double radius, double *out);

/**
 * # Safety
 * `ctx` must be a live context and `out` a valid pointer.
 */
enum UdStatus ud_kinematics(struct UdContext *ctx,
                            double a,
                            double radius,
                            double tau,
                            struct UdKinematicState *out);

/**
 * Dimensionless trajectory integral `G(θ₁)`.
 *
 * # Safety
 * `ctx` must be a live context and `out` a valid pointer to a double.
 */
enum UdStatus ud_trajectory_integral(struct UdContext *ctx, double theta1, double *out);

/**
 * # Safety
 * `ctx` must be a live context and `out` a valid pointer to a double.
 */
enum UdStatus ud_mean_occupation(struct UdContext *ctx, double omega, double a, double *out);

/**
 * `method` takes a `UdMethod` value.
 *
 * # Safety
 * `ctx` must be a live context and `out` a valid pointer.
 */
enum UdStatus ud_phase_variance(struct UdContext *ctx,
                                double a,
                                double radius,
                                double epsilon,
                                uint32_t method,
                                struct UdDecoherenceResult *out);

/**
 * Relative least-squares fit of `G(θ)² ≈ C θ sinh⁴θ` over `grid[0..len]`.
 * Writes `[C, max relative deviation]` to `out`.
 *
 * # Safety
 * `grid` must point to `len` doubles; `out` to two writable doubles.
 */
enum UdStatus ud_fit_constant(struct UdContext *ctx,
                              const double *grid,
                              size_t len,
                              double (*out)[2]);

/**
 * Writes `[prefactor, J by quadrature, J by zeta series]` to `out`.
 *
 * # Safety
 * `out` must point to three writable doubles.
 */
enum UdStatus ud_spectral_prefactor(struct UdContext *ctx, double (*out)[3]);

/**
 * Mirror check for the dynamical-Casimir comparison.
 *
 * # Safety
 * `ctx` must be a live context and `out` a valid pointer.
 */
enum UdStatus ud_dce_check(struct UdContext *ctx,
                           double mass,
                           double omega0,
                           double amplitude,
                           uint32_t half_periods,
                           struct UdMirrorReport *out);

/**
 * New ensemble whose quantization volume gives `mean_events` scatterings
 * on average over `tau`. NULL on invalid input (message in `ctx`).
 *
 * # Safety
 * `ctx` must be a live context.
 */
struct UdEnsemble *ud_ensemble_new(struct UdContext *ctx,
                                   uint64_t seed,
                                   size_t n_realizations,
                                   double k,
                                   double a,
                                   double radius,
                                   double epsilon,
                                   double tau,
                                   double mean_events);

/**
 * # Safety
 * `ensemble` must be null or a pointer from `ud_ensemble_new` not yet freed.
 */
void ud_ensemble_free(struct UdEnsemble *ensemble);

/**
 * # Safety
 * `ctx` and `ensemble` must be live handles; `out` a valid pointer.
 */
enum UdStatus ud_ensemble_momentum_walk(struct UdContext *ctx,
                                        const struct UdEnsemble *ensemble,
                                        double tau,
                                        struct UdMcResult *out);

/**
 * # Safety
 * `ctx` and `ensemble` must be live handles; `out` a valid pointer.
 */
enum UdStatus ud_ensemble_phase_walk(struct UdContext *ctx,
                                     const struct UdEnsemble *ensemble,
                                     struct UdPhaseWalkResult *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UNRUH_DECOHERENCE_H */

#ifndef MICHELL_DENSITY_HPP
#define MICHELL_DENSITY_HPP

#include "michell/sym2.hpp"

namespace michell {

/// Parameters shared by the energy densities.
struct EnergyParams {
    double lambda = 1.0;        ///< Lagrange multiplier for the weight, > 0
    double smooth_eps = 0.0;    ///< pseudo-Huber width for |.| replacements
    double interface_tol = 0.0; ///< diagnostic half-width of the branch band

    EnergyParams() = default;
    explicit EnergyParams(double lam, double eps = 0.0, double itol = 0.0)
        : lambda(lam), smooth_eps(eps), interface_tol(itol) {}
};

/// Two-phase density: 0 at the zero matrix, lambda + |xi|^2 otherwise.
/// Genuinely discontinuous at 0; the zero test is bitwise on purpose.
double f_lambda(const Sym2d& xi, const EnergyParams& p);

/// Closed-form quasiconvex envelope of f_lambda:
///   2 sqrt(lambda) rho0(xi) - 2 |det xi|   if rho0(xi) <= sqrt(lambda)
///   |xi|^2 + lambda                        otherwise.
/// The branches agree on the interface, so ties go to the low branch.
double qc_envelope(const Sym2d& xi, const EnergyParams& p);

/// lambda^{-1/2} * qc_envelope; equals 2(rho0 - lambda^{-1/2}|det|) on the
/// low branch.
double g_lambda(const Sym2d& xi, const EnergyParams& p);

/// Limit (Michell) density 2 rho0(xi).
double limit_density(const Sym2d& xi);

/// Differentiable surrogate for g_lambda: |x| -> sqrt(x^2 + eps^2) inside
/// rho0 and |det| -> sqrt(det^2 + eps^4); branch chosen by the smoothed
/// rho0. Requires smooth_eps > 0.
double g_lambda_smooth(const Sym2d& xi, const EnergyParams& p);

/// Gradient of g_lambda_smooth with respect to (a, b, d), stored in the
/// corresponding Sym2 slots. Closed-form eigenvalue derivatives with the
/// radius guarded away from zero.
Sym2d g_lambda_smooth_grad(const Sym2d& xi, const EnergyParams& p);

/// 2 * sum_i sqrt(lambda_i^2 + eps^2) and its gradient. Requires eps > 0.
double limit_density_smooth(const Sym2d& xi, double eps);
Sym2d limit_density_smooth_grad(const Sym2d& xi, double eps);

/// Smoothed rho0 (sum of pseudo-Huber eigenvalue magnitudes); exposed for
/// branch diagnostics.
double rho0_smooth(const Sym2d& xi, double eps);

}  // namespace michell

#endif

#include "michell/density.hpp"

#include <cmath>
#include <stdexcept>

namespace michell {

namespace {

inline double pseudo_abs(double x, double eps) { return std::sqrt(x * x + eps * eps); }

// d/dx sqrt(x^2 + eps^2)
inline double pseudo_abs_d(double x, double eps) { return x / std::sqrt(x * x + eps * eps); }

struct EigenDerivs {
    double l1, l2;       // eigenvalues, descending
    double da1, db1, dd1; // partials of l1 w.r.t. (a, b, d)
    double da2, db2, dd2; // partials of l2
};

// l_{1,2} = (a+d)/2 +- r, r = hypot((a-d)/2, b). The radius is guarded so
// the formulas stay finite at repeated eigenvalues; the smoothed densities
// are differentiable there and the guarded limit is correct.
EigenDerivs eigen_derivs(const Sym2d& m) {
    const double half_diff = (m.a - m.d) / 2.0;
    const double r = std::max(std::hypot(half_diff, m.b), 1e-300);
    const double mid = (m.a + m.d) / 2.0;
    const double dr_da = half_diff / (2.0 * r);
    const double dr_db = m.b / r;
    EigenDerivs e;
    e.l1 = mid + r;
    e.l2 = mid - r;
    e.da1 = 0.5 + dr_da;
    e.db1 = dr_db;
    e.dd1 = 0.5 - dr_da;
    e.da2 = 0.5 - dr_da;
    e.db2 = -dr_db;
    e.dd2 = 0.5 + dr_da;
    return e;
}

}  // namespace

double f_lambda(const Sym2d& xi, const EnergyParams& p) {
    if (xi.is_zero()) return 0.0;
    return p.lambda + squared_norm(xi);
}

double qc_envelope(const Sym2d& xi, const EnergyParams& p) {
    const double sqrt_lam = std::sqrt(p.lambda);
    const double r0 = rho0(xi);
    if (r0 <= sqrt_lam) return 2.0 * sqrt_lam * r0 - 2.0 * std::abs(det(xi));
    return squared_norm(xi) + p.lambda;
}

double g_lambda(const Sym2d& xi, const EnergyParams& p) {
    return qc_envelope(xi, p) / std::sqrt(p.lambda);
}

double limit_density(const Sym2d& xi) { return 2.0 * rho0(xi); }

double rho0_smooth(const Sym2d& xi, double eps) {
    const auto [l1, l2] = eigenvalues(xi);
    return pseudo_abs(l1, eps) + pseudo_abs(l2, eps);
}

double g_lambda_smooth(const Sym2d& xi, const EnergyParams& p) {
    if (p.smooth_eps <= 0.0)
        throw std::invalid_argument("g_lambda_smooth: smooth_eps must be > 0");
    const double eps = p.smooth_eps;
    const double sqrt_lam = std::sqrt(p.lambda);
    const double r0s = rho0_smooth(xi, eps);
    if (r0s > sqrt_lam)  // high branch is already smooth
        return (squared_norm(xi) + p.lambda) / sqrt_lam;
    const double dets = std::sqrt(det(xi) * det(xi) + eps * eps * eps * eps);
    return 2.0 * (r0s - dets / sqrt_lam);
}

Sym2d g_lambda_smooth_grad(const Sym2d& xi, const EnergyParams& p) {
    if (p.smooth_eps <= 0.0)
        throw std::invalid_argument("g_lambda_smooth_grad: smooth_eps must be > 0");
    const double eps = p.smooth_eps;
    const double sqrt_lam = std::sqrt(p.lambda);
    if (rho0_smooth(xi, eps) > sqrt_lam) {
        const double c = 2.0 / sqrt_lam;
        return {c * xi.a, 2.0 * c * xi.b, c * xi.d};
    }
    const EigenDerivs e = eigen_derivs(xi);
    const double s1 = pseudo_abs_d(e.l1, eps);
    const double s2 = pseudo_abs_d(e.l2, eps);
    const double dt = det(xi);
    const double sgn_det = dt / std::sqrt(dt * dt + eps * eps * eps * eps);
    const double c = 2.0 / sqrt_lam;
    // det = a d - b^2
    return {2.0 * (s1 * e.da1 + s2 * e.da2) - c * sgn_det * xi.d,
            2.0 * (s1 * e.db1 + s2 * e.db2) + c * sgn_det * 2.0 * xi.b,
            2.0 * (s1 * e.dd1 + s2 * e.dd2) - c * sgn_det * xi.a};
}

double limit_density_smooth(const Sym2d& xi, double eps) {
    if (eps <= 0.0) throw std::invalid_argument("limit_density_smooth: eps must be > 0");
    return 2.0 * rho0_smooth(xi, eps);
}

Sym2d limit_density_smooth_grad(const Sym2d& xi, double eps) {
    if (eps <= 0.0) throw std::invalid_argument("limit_density_smooth_grad: eps must be > 0");
    const EigenDerivs e = eigen_derivs(xi);
    const double s1 = pseudo_abs_d(e.l1, eps);
    const double s2 = pseudo_abs_d(e.l2, eps);
    return {2.0 * (s1 * e.da1 + s2 * e.da2),
            2.0 * (s1 * e.db1 + s2 * e.db2),
            2.0 * (s1 * e.dd1 + s2 * e.dd2)};
}

}  // namespace michell

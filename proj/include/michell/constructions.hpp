#ifndef MICHELL_CONSTRUCTIONS_HPP
#define MICHELL_CONSTRUCTIONS_HPP

#include <Eigen/Core>

#include "michell/grid.hpp"
#include "michell/sym2.hpp"

namespace michell {

/// Parameters of a two-slope laminate profile: u'' oscillates between
/// alpha (on a fraction t of each period) and beta, with k periods and
/// phase offset q chosen so the oscillation integrates to zero twice.
struct LaminateSpec {
    double alpha = 0.0;
    double beta = 0.0;
    double t = 0.5;
    int k = 8;
    double q = -1.0;          ///< phase offset; negative means q_offset(t)
    double eps_margin = 0.1;  ///< boundary cutoff width of the 2D blend
    double eta_angle = 0.0;   ///< lamination direction of the 2D blend
};

/// Profile samples at n uniform nodes on [0, 1].
struct SampledProfile {
    int n = 0;
    Eigen::ArrayXd x, u, du, ddu;
};

/// Phase offset q in [0, 1-t] that makes the double integral of the
/// mean-zero square wave over one period vanish: q = (1-t)/2, the root of
/// the piecewise-quadratic period integral. Rejects t in {0, 1}.
double q_offset(double t);

/// Two-slope laminate on [0, 1]: u = u_t + double integral of the k-period
/// square wave, with u_t(x) = (t alpha + (1-t) beta) x^2 / 2. Matches the
/// value and slope of u_t at both endpoints exactly. Requires n >= 64 k.
SampledProfile laminate_1d(const LaminateSpec& spec, int n);

/// Square-wave oscillation machinery shared by the laminate builders:
/// phi is the mean-zero square wave of one period (amplitude values
/// (1-t) c and -t c), psi its integral, psi2 the second integral extended
/// over whole periods.
struct LaminateWave {
    double t, q, c;  // c is the jump amplitude alpha - beta
    LaminateWave(double t_, double q_, double c_);
    double phi(double y) const;   // y in periods
    double psi(double y) const;
    double psi2(double y) const;
    double period_psi_integral() const;  // zero at q = q_offset(t)
};

/// Laminate between Hessians xi1 and xi2 (their difference must be rank
/// one, xi1 - xi2 = alpha eta (x) eta) on [0,1]^2: the oscillatory profile
/// along eta blended to the quadratic of t xi1 + (1-t) xi2 by a smooth
/// cutoff of width eps_margin near the boundary. grid_n nodes per side.
ScalarField build_laminate_2d(const Sym2d& xi1, const Sym2d& xi2, double t, int k,
                              double eps_margin, int grid_n);

/// Axis-aligned two-level laminate witnessing the envelope value at
/// diag(x, y), 0 < |x| + |y| < sqrt(lambda): a one-band outer split along
/// e2 between diag(x, y/beta) and diag(x, 0), the latter refined by a
/// k-period inner laminate along e1 between diag(x/a, 0) and 0. Both
/// oscillations match value and slope on the square's boundary exactly;
/// the inner envelope ramps over eps_margin times the band width. The
/// averaged F_lambda energy of the returned field approaches the
/// quasiconvex envelope value as k grows.
ScalarField build_two_level_laminate(double x, double y, double lambda, int k,
                                     double eps_margin, int grid_n);

/// Shrink-and-mollify recovery construction: v = u_limit - f_field is
/// pulled toward the domain center by the rectangle dilation with factor
/// sqrt(1 + C1 eps), mollified with a compactly supported C^2 bump of
/// width eps(lambda) = 4 c2 |D^2 v| / sqrt(lambda), and added back to
/// f_field. The traces of the result match those of f_field.
struct RecoveryResult {
    ScalarField field;
    double eps = 0.0;       ///< mollification width used
    double hess_max = 0.0;  ///< max Hessian norm of the mollified part
    double v_mass = 0.0;    ///< discrete |D^2 v|
};
RecoveryResult recovery_sequence(const ScalarField& u_limit, const ScalarField& f_field,
                                 double lambda, double c2);

}  // namespace michell

#endif

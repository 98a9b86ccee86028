#ifndef MICHELL_ENVELOPE_HPP
#define MICHELL_ENVELOPE_HPP

#include <functional>
#include <vector>

#include "michell/density.hpp"
#include "michell/sym2.hpp"

namespace michell {

using DensityFn = std::function<double(const Sym2d&)>;

/// One symmetric rank-one split of xi into the pair
///   xi1 = xi + (1-t) alpha eta(x)eta,   xi2 = xi - t alpha eta(x)eta,
/// so that t xi1 + (1-t) xi2 = xi holds exactly.
struct SplitCandidate {
    double t = 0.0;
    double alpha = 0.0;
    double eta_angle = 0.0;
    double value = 0.0;  ///< convex combination of the child values
};

Sym2d split_child1(const Sym2d& xi, const SplitCandidate& c);
Sym2d split_child2(const Sym2d& xi, const SplitCandidate& c);

/// Discretization of the lamination infimum over (t, alpha, theta).
struct LaminationGrid {
    int n_t = 9;
    int n_alpha = 17;
    double alpha_max = 4.0;  ///< amplitude search radius, > 0
    int n_theta = 8;         ///< directions sampled over [0, pi)
    int refine_rounds = 3;   ///< coordinate golden-section passes

    /// Default grid for F_lambda searches; splits leaving rho0 <= 2 sqrt(lambda)
    /// land on the convex high branch, hence alpha_max = 4 sqrt(lambda).
    static LaminationGrid for_lambda(double lambda);
    void validate() const;
};

/// One lamination step: min over the sampled (t, alpha, theta) grid of
/// t f(xi1) + (1-t) f(xi2), refined by golden section in alpha and t around
/// the best cell. The alpha = 0 candidate is always included, so the result
/// never exceeds f(xi).
double rsym_step(const DensityFn& f, const Sym2d& xi, const LaminationGrid& grid);

/// k recursive lamination steps with the child values memoized on a
/// quantized lattice. Nonincreasing in k.
double rsym_iterate(const DensityFn& f, const Sym2d& xi, int k, const LaminationGrid& grid);

/// Closed-form two-level split of a diagonal matrix diag(x, y) with
/// 0 < |x| + |y| < sqrt(lambda): the inner split laminates diag(x, 0)
/// against 0 along e1 with weight |x|/sqrt(lambda); the outer split
/// laminates diag(x, y/beta) against diag(x, 0) along e2 with weight
/// beta = |y|/(sqrt(lambda) - |x|). The value
///   2 sqrt(lambda) (|x| + |y|) - 2 |x y|
/// equals qc_envelope to machine precision.
struct RsglSplit {
    double value = 0.0;
    std::vector<SplitCandidate> splits;  ///< outer first when present
};
RsglSplit rsgl_split(const Sym2d& xi_diagonal, double lambda);

}  // namespace michell

#endif

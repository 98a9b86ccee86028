#ifndef MICHELL_SOLVER_HPP
#define MICHELL_SOLVER_HPP

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "michell/density.hpp"
#include "michell/grid.hpp"

namespace michell {

struct SolveConfig {
    double lambda = 100.0;  ///< ignored by the limit solve
    std::vector<double> smoothing = {1e-1, 1e-2, 1e-3};  ///< strictly decreasing
    int max_iters = 2000;    ///< outer iterations per smoothing stage
    double grad_tol = 1e-6;  ///< stop when sup|grad| <= grad_tol (1 + |E|)
    double step0 = 1.0;      ///< initial line-search step scale
    unsigned seed = 1;       ///< seed of the initial perturbation
    double init_perturb = 0.0;  ///< amplitude of the seeded perturbation
    int threads = 1;
    int extension_cg_iters = 500;  ///< budget of the clamped extension solve
    double recovery_c2 = 4.0;      ///< mollifier constant of the sweep recovery check

    void validate() const;
};

struct SolveReport {
    double energy = 0.0;  ///< exact (unsmoothed) energy of the final field
    std::vector<double> energy_history;  ///< smoothed energy per accepted step
    double grad_norm = 0.0;
    double wall_s = 0.0;
    double high_branch_frac = 0.0;  ///< fraction of nodes with rho0 > sqrt(lambda)
    int iters = 0;
    bool converged = false;
    std::string message;
};

/// Which discrete functional a DiscreteObjective represents.
enum class Objective { FiniteLambda, Limit };

/// Smoothed discrete energy and its gradient over the interior degrees of
/// freedom, with the boundary data imposed through the ghost rules. Used by
/// the minimizers and exposed for gradient verification.
class DiscreteObjective {
public:
    DiscreteObjective(Objective kind, const Grid2D& g, const ClampData& data,
                      const EnergyParams& params, int threads = 1);

    int dof_count() const { return (g_.nx - 2) * (g_.ny - 2); }

    /// Smoothed energy at the given interior values.
    double value(const Eigen::VectorXd& dofs) const;
    /// Smoothed energy and gradient (adjoint of the ghost-fill pipeline).
    double value_and_gradient(const Eigen::VectorXd& dofs, Eigen::VectorXd& grad) const;
    /// Exact (unsmoothed) energy: g_lambda or the limit functional with the
    /// absolute-value boundary penalty.
    double exact_value(const Eigen::VectorXd& dofs) const;

    void assemble_field(const Eigen::VectorXd& dofs, ScalarField& u) const;
    Eigen::VectorXd extract_dofs(const ScalarField& u) const;
    double high_branch_fraction(const Eigen::VectorXd& dofs) const;

    const EnergyParams& params() const { return params_; }
    void set_smooth_eps(double eps) { params_.smooth_eps = eps; }
    GhostMode ghost_mode() const;

private:
    Objective kind_;
    Grid2D g_;
    ClampData data_;
    EnergyParams params_;
    int threads_;
};

/// Clamped quadratic-extension field: minimizes the discrete biharmonic
/// energy sum |hessian|^2 under both trace constraints by conjugate
/// gradients with a fixed iteration budget.
ScalarField clamped_extension(const ClampData& data, const Grid2D& g, int cg_iters = 500);

/// Gradient descent with Armijo backtracking and continuation over the
/// smoothing schedule on the relaxed finite-lambda functional. Both traces
/// are imposed through the clamped ghost rule. `init` overrides the default
/// initialization by the clamped extension.
std::pair<ScalarField, SolveReport> minimize_finite_lambda(const ClampData& data,
                                                           const Grid2D& g,
                                                           const SolveConfig& cfg,
                                                           const ScalarField* init = nullptr);

/// Same scheme on the limit functional 2 rho0 + boundary penalty; only the
/// value trace is hard-constrained. The exact discrete problem is convex.
std::pair<ScalarField, SolveReport> minimize_limit(const ClampData& data, const Grid2D& g,
                                                   const SolveConfig& cfg,
                                                   const ScalarField* init = nullptr);

struct SweepRow {
    double lambda = 0.0;
    double energy = 0.0;        ///< exact finite-lambda minimizer energy
    double limit_energy = 0.0;  ///< exact limit minimizer energy
    double gap = 0.0;           ///< energy - limit_energy
    double high_branch_frac = 0.0;
    double recovery_energy = 0.0;  ///< finite-lambda energy of the recovery field
    int iters = 0;
    double wall_s = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    ScalarField limit_minimizer;
    std::vector<ScalarField> minimizers;  ///< per lambda
    SolveReport limit_report;
};

/// Per-lambda finite solves plus one limit solve; each finite solve starts
/// from the limit minimizer and each row carries the recovery-sequence
/// energy check. Lambdas must be increasing.
SweepResult lambda_sweep(const std::vector<std::pair<double, ClampData>>& bdata_per_lambda,
                         const Grid2D& g, const SolveConfig& cfg);

}  // namespace michell

#endif

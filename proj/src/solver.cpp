#include "michell/solver.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

#include "michell/constructions.hpp"

namespace michell {

namespace {

// body(worker, lo, hi): worker indices are distinct per thread.
void parallel_rows(int ny, int threads, const std::function<void(int, int, int)>& body) {
    if (threads <= 1) {
        body(0, 0, ny);
        return;
    }
    std::vector<std::thread> pool;
    const int chunk = (ny + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const int lo = t * chunk, hi = std::min(ny, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(body, t, lo, hi);
    }
    for (auto& th : pool) th.join();
}

inline double pseudo_huber(double x, double eps) {
    return eps > 0.0 ? std::sqrt(x * x + eps * eps) : std::abs(x);
}
inline double pseudo_huber_d(double x, double eps) {
    return x / std::sqrt(x * x + eps * eps);
}

// Adjoint of the ghost-fill in apply_clamped_boundary: pushes cotangents
// from ghost entries back onto the nodes they were extrapolated from,
// in reverse assignment order, then clears the data-determined entries.
void ghost_fill_adjoint(ScalarField& gbar, GhostMode mode) {
    const Grid2D& g = gbar.grid();
    const int nx = g.nx, ny = g.ny;

    auto push4 = [&gbar](double w0, double w1, double w2, double w3, int i0, int j0, int di,
                         int dj, double bar) {
        gbar(i0, j0) += w0 * bar;
        gbar(i0 + di, j0 + dj) += w1 * bar;
        gbar(i0 + 2 * di, j0 + 2 * dj) += w2 * bar;
        gbar(i0 + 3 * di, j0 + 3 * dj) += w3 * bar;
    };

    // Corner blocks (last assigned, first reversed).
    for (int j : {-2, -1, ny, ny + 1}) {
        push4(4, -6, 4, -1, 0, j, 1, 0, gbar(-1, j));
        gbar(-1, j) = 0.0;
        push4(10, -20, 15, -4, 0, j, 1, 0, gbar(-2, j));
        gbar(-2, j) = 0.0;
        push4(4, -6, 4, -1, nx - 1, j, -1, 0, gbar(nx, j));
        gbar(nx, j) = 0.0;
        push4(10, -20, 15, -4, nx - 1, j, -1, 0, gbar(nx + 1, j));
        gbar(nx + 1, j) = 0.0;
    }

    // Left/right ghost columns; in clamped mode the second layer was
    // extrapolated through the first, so it is reversed first.
    for (int j = 0; j < ny; ++j) {
        if (mode == GhostMode::Clamped) {
            push4(4, -6, 4, -1, -1, j, 1, 0, gbar(-2, j));
            gbar(-2, j) = 0.0;
            gbar(1, j) += gbar(-1, j);
            gbar(-1, j) = 0.0;
            push4(4, -6, 4, -1, nx, j, -1, 0, gbar(nx + 1, j));
            gbar(nx + 1, j) = 0.0;
            gbar(nx - 2, j) += gbar(nx, j);
            gbar(nx, j) = 0.0;
        } else {
            push4(10, -20, 15, -4, 0, j, 1, 0, gbar(-2, j));
            gbar(-2, j) = 0.0;
            push4(4, -6, 4, -1, 0, j, 1, 0, gbar(-1, j));
            gbar(-1, j) = 0.0;
            push4(10, -20, 15, -4, nx - 1, j, -1, 0, gbar(nx + 1, j));
            gbar(nx + 1, j) = 0.0;
            push4(4, -6, 4, -1, nx - 1, j, -1, 0, gbar(nx, j));
            gbar(nx, j) = 0.0;
        }
    }

    // Bottom/top ghost rows.
    for (int i = 0; i < nx; ++i) {
        if (mode == GhostMode::Clamped) {
            push4(4, -6, 4, -1, i, -1, 0, 1, gbar(i, -2));
            gbar(i, -2) = 0.0;
            gbar(i, 1) += gbar(i, -1);
            gbar(i, -1) = 0.0;
            push4(4, -6, 4, -1, i, ny, 0, -1, gbar(i, ny + 1));
            gbar(i, ny + 1) = 0.0;
            gbar(i, ny - 2) += gbar(i, ny);
            gbar(i, ny) = 0.0;
        } else {
            push4(10, -20, 15, -4, i, 0, 0, 1, gbar(i, -2));
            gbar(i, -2) = 0.0;
            push4(4, -6, 4, -1, i, 0, 0, 1, gbar(i, -1));
            gbar(i, -1) = 0.0;
            push4(10, -20, 15, -4, i, ny - 1, 0, -1, gbar(i, ny + 1));
            gbar(i, ny + 1) = 0.0;
            push4(4, -6, 4, -1, i, ny - 1, 0, -1, gbar(i, ny));
            gbar(i, ny) = 0.0;
        }
    }

    // Boundary rows are data.
    for (int i = 0; i < nx; ++i) {
        gbar(i, 0) = 0.0;
        gbar(i, ny - 1) = 0.0;
    }
    for (int j = 0; j < ny; ++j) {
        gbar(0, j) = 0.0;
        gbar(nx - 1, j) = 0.0;
    }
}

}  // namespace

void SolveConfig::validate() const {
    if (smoothing.empty()) throw std::invalid_argument("SolveConfig: empty smoothing schedule");
    double prev = std::numeric_limits<double>::infinity();
    for (double e : smoothing) {
        if (e <= 0.0 || e >= prev)
            throw std::invalid_argument(
                "SolveConfig: smoothing schedule must be strictly decreasing and positive");
        prev = e;
    }
    if (max_iters < 1) throw std::invalid_argument("SolveConfig: max_iters must be >= 1");
}

DiscreteObjective::DiscreteObjective(Objective kind, const Grid2D& g, const ClampData& data,
                                     const EnergyParams& params, int threads)
    : kind_(kind), g_(g), data_(data), params_(params), threads_(std::max(1, threads)) {}

GhostMode DiscreteObjective::ghost_mode() const {
    return kind_ == Objective::FiniteLambda ? GhostMode::Clamped : GhostMode::Free;
}

void DiscreteObjective::assemble_field(const Eigen::VectorXd& dofs, ScalarField& u) const {
    if (u.grid().nx != g_.nx || u.grid().ny != g_.ny) u = ScalarField(g_);
    int k = 0;
    for (int j = 1; j < g_.ny - 1; ++j)
        for (int i = 1; i < g_.nx - 1; ++i) u(i, j) = dofs[k++];
    apply_clamped_boundary(u, data_, ghost_mode());
}

Eigen::VectorXd DiscreteObjective::extract_dofs(const ScalarField& u) const {
    Eigen::VectorXd d(dof_count());
    int k = 0;
    for (int j = 1; j < g_.ny - 1; ++j)
        for (int i = 1; i < g_.nx - 1; ++i) d[k++] = u(i, j);
    return d;
}

double DiscreteObjective::value(const Eigen::VectorXd& dofs) const {
    ScalarField u(g_);
    assemble_field(dofs, u);
    const EnergyParams p = params_;
    std::vector<double> partial(threads_, 0.0);
    const bool finite = kind_ == Objective::FiniteLambda;
    parallel_rows(g_.ny, threads_, [&](int worker, int lo, int hi) {
        double acc = 0.0;
        for (int j = lo; j < hi; ++j)
            for (int i = 0; i < g_.nx; ++i) {
                const Sym2d H = discrete_hessian(u, i, j);
                acc += quad_weight(g_, i, j) *
                       (finite ? g_lambda_smooth(H, p) : limit_density_smooth(H, p.smooth_eps));
            }
        partial[worker] += acc;
    });
    double E = 0.0;
    for (double v : partial) E += v;
    if (kind_ == Objective::Limit) E += boundary_penalty(u, data_, params_.smooth_eps);
    return E;
}

double DiscreteObjective::exact_value(const Eigen::VectorXd& dofs) const {
    ScalarField u(g_);
    assemble_field(dofs, u);
    const EnergyParams p = params_;
    double E = 0.0;
    for (int j = 0; j < g_.ny; ++j)
        for (int i = 0; i < g_.nx; ++i) {
            const Sym2d H = discrete_hessian(u, i, j);
            E += quad_weight(g_, i, j) *
                 (kind_ == Objective::FiniteLambda ? g_lambda(H, p) : limit_density(H));
        }
    if (kind_ == Objective::Limit) E += boundary_penalty(u, data_, 0.0);
    return E;
}

double DiscreteObjective::high_branch_fraction(const Eigen::VectorXd& dofs) const {
    ScalarField u(g_);
    assemble_field(dofs, u);
    const double sqrt_lam = std::sqrt(params_.lambda);
    int high = 0, total = 0;
    for (int j = 0; j < g_.ny; ++j)
        for (int i = 0; i < g_.nx; ++i) {
            ++total;
            if (rho0(discrete_hessian(u, i, j)) > sqrt_lam) ++high;
        }
    return static_cast<double>(high) / total;
}

double DiscreteObjective::value_and_gradient(const Eigen::VectorXd& dofs,
                                             Eigen::VectorXd& grad) const {
    ScalarField u(g_);
    assemble_field(dofs, u);
    const EnergyParams p = params_;
    const bool finite = kind_ == Objective::FiniteLambda;
    const double h2 = g_.h * g_.h;

    // Per-node weighted density gradients (node-local, parallel).
    Eigen::ArrayXXd Sa(g_.ny, g_.nx), Sb(g_.ny, g_.nx), Sd(g_.ny, g_.nx);
    std::vector<double> partial(threads_, 0.0);
    parallel_rows(g_.ny, threads_, [&](int worker, int lo, int hi) {
        double acc = 0.0;
        for (int j = lo; j < hi; ++j)
            for (int i = 0; i < g_.nx; ++i) {
                const Sym2d H = discrete_hessian(u, i, j);
                const double w = quad_weight(g_, i, j);
                acc += w * (finite ? g_lambda_smooth(H, p)
                                   : limit_density_smooth(H, p.smooth_eps));
                const Sym2d dg = finite ? g_lambda_smooth_grad(H, p)
                                        : limit_density_smooth_grad(H, p.smooth_eps);
                Sa(j, i) = w * dg.a;
                Sb(j, i) = w * dg.b;
                Sd(j, i) = w * dg.d;
            }
        partial[worker] += acc;
    });
    double E = 0.0;
    for (double v : partial) E += v;

    // Scatter the stencil adjoints into a full cotangent field.
    ScalarField gbar(g_);
    for (int j = 0; j < g_.ny; ++j)
        for (int i = 0; i < g_.nx; ++i) {
            const double sa = Sa(j, i) / h2, sd = Sd(j, i) / h2, sb = Sb(j, i) / (4.0 * h2);
            gbar(i - 1, j) += sa;
            gbar(i, j) -= 2.0 * sa;
            gbar(i + 1, j) += sa;
            gbar(i, j - 1) += sd;
            gbar(i, j) -= 2.0 * sd;
            gbar(i, j + 1) += sd;
            gbar(i + 1, j + 1) += sb;
            gbar(i - 1, j - 1) += sb;
            gbar(i + 1, j - 1) -= sb;
            gbar(i - 1, j + 1) -= sb;
        }

    if (kind_ == Objective::Limit) {
        E += boundary_penalty(u, data_, p.smooth_eps);
        // d/du of 2 h sum w |gamma1 - f2|_eps with the centered ghost trace.
        const BoundaryTrace t = gamma1_trace(u);
        const double c = 2.0 * g_.h;
        const double inv2h = 1.0 / (2.0 * g_.h);
        for (int i = 0; i < g_.nx; ++i) {
            const double w = (i == 0 || i == g_.nx - 1) ? 0.5 : 1.0;
            const double db = c * w * pseudo_huber_d(t.bottom[i] - data_.f2_bottom[i],
                                                     p.smooth_eps) * inv2h;
            gbar(i, -1) += db;
            gbar(i, 1) -= db;
            const double dt = c * w * pseudo_huber_d(t.top[i] - data_.f2_top[i],
                                                     p.smooth_eps) * inv2h;
            gbar(i, g_.ny) += dt;
            gbar(i, g_.ny - 2) -= dt;
        }
        for (int j = 0; j < g_.ny; ++j) {
            const double w = (j == 0 || j == g_.ny - 1) ? 0.5 : 1.0;
            const double dl = c * w * pseudo_huber_d(t.left[j] - data_.f2_left[j],
                                                     p.smooth_eps) * inv2h;
            gbar(-1, j) += dl;
            gbar(1, j) -= dl;
            const double dr = c * w * pseudo_huber_d(t.right[j] - data_.f2_right[j],
                                                     p.smooth_eps) * inv2h;
            gbar(g_.nx, j) += dr;
            gbar(g_.nx - 2, j) -= dr;
        }
    }

    ghost_fill_adjoint(gbar, ghost_mode());

    grad.resize(dof_count());
    int k = 0;
    for (int j = 1; j < g_.ny - 1; ++j)
        for (int i = 1; i < g_.nx - 1; ++i) grad[k++] = gbar(i, j);
    return E;
}

ScalarField clamped_extension(const ClampData& data, const Grid2D& g, int cg_iters) {
    // Gradient of sum over nodes of |hessian|_F^2 (linear in the dofs).
    auto gradQ = [&](const Eigen::VectorXd& dofs) -> Eigen::VectorXd {
        ScalarField u(g);
        int k = 0;
        for (int j = 1; j < g.ny - 1; ++j)
            for (int i = 1; i < g.nx - 1; ++i) u(i, j) = dofs[k++];
        apply_clamped_boundary(u, data, GhostMode::Clamped);
        const double h2 = g.h * g.h;
        ScalarField gbar(g);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const Sym2d H = discrete_hessian(u, i, j);
                const double sa = 2.0 * H.a / h2, sd = 2.0 * H.d / h2,
                             sb = 4.0 * H.b / (4.0 * h2);
                gbar(i - 1, j) += sa;
                gbar(i, j) -= 2.0 * sa;
                gbar(i + 1, j) += sa;
                gbar(i, j - 1) += sd;
                gbar(i, j) -= 2.0 * sd;
                gbar(i, j + 1) += sd;
                gbar(i + 1, j + 1) += sb;
                gbar(i - 1, j - 1) += sb;
                gbar(i + 1, j - 1) -= sb;
                gbar(i - 1, j + 1) -= sb;
            }
        ghost_fill_adjoint(gbar, GhostMode::Clamped);
        Eigen::VectorXd out((g.nx - 2) * (g.ny - 2));
        k = 0;
        for (int j = 1; j < g.ny - 1; ++j)
            for (int i = 1; i < g.nx - 1; ++i) out[k++] = gbar(i, j);
        return out;
    };

    const int n = (g.nx - 2) * (g.ny - 2);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);
    const Eigen::VectorXd b = -gradQ(zero);
    auto apply_A = [&](const Eigen::VectorXd& x) { return gradQ(x) + b; };

    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd r = b;
    Eigen::VectorXd p = r;
    double rr = r.squaredNorm();
    const double tol2 = 1e-24 * std::max(1.0, b.squaredNorm());
    for (int it = 0; it < cg_iters && rr > tol2; ++it) {
        const Eigen::VectorXd Ap = apply_A(p);
        const double pAp = p.dot(Ap);
        if (pAp <= 0.0) break;
        const double alpha = rr / pAp;
        x += alpha * p;
        r -= alpha * Ap;
        const double rr_new = r.squaredNorm();
        p = r + (rr_new / rr) * p;
        rr = rr_new;
    }

    ScalarField u(g);
    int k = 0;
    for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i) u(i, j) = x[k++];
    apply_clamped_boundary(u, data, GhostMode::Clamped);
    return u;
}

namespace {

std::pair<ScalarField, SolveReport> run_descent(Objective kind, const ClampData& data,
                                                const Grid2D& g, const SolveConfig& cfg,
                                                const ScalarField* init) {
    cfg.validate();
    const auto t_start = std::chrono::steady_clock::now();

    DiscreteObjective obj(kind, g, data, EnergyParams(cfg.lambda, cfg.smoothing.front()),
                          cfg.threads);

    ScalarField u0 = init ? *init : clamped_extension(data, g, cfg.extension_cg_iters);
    Eigen::VectorXd x = obj.extract_dofs(u0);
    if (cfg.init_perturb > 0.0) {
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> dist(-cfg.init_perturb, cfg.init_perturb);
        for (int i = 0; i < x.size(); ++i) x[i] += dist(rng);
    }

    SolveReport rep;
    rep.converged = true;
    Eigen::VectorXd grad(x.size()), xt(x.size());
    double step = cfg.step0;

    for (double eps : cfg.smoothing) {
        obj.set_smooth_eps(eps);
        double E = obj.value_and_gradient(x, grad);
        bool stage_done = false;
        for (int it = 0; it < cfg.max_iters; ++it) {
            const double ginf = grad.lpNorm<Eigen::Infinity>();
            rep.grad_norm = ginf;
            if (ginf <= cfg.grad_tol * (1.0 + std::abs(E))) {
                stage_done = true;
                break;
            }
            const double g2 = grad.squaredNorm();
            bool accepted = false;
            for (int ls = 0; ls < 60; ++ls) {
                xt = x - step * grad;
                const double Et = obj.value(xt);
                if (Et <= E - 1e-4 * step * g2) {
                    x.swap(xt);
                    E = Et;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            ++rep.iters;
            if (!accepted) {
                rep.converged = false;
                rep.message = "line search step underflow";
                stage_done = true;
                break;
            }
            rep.energy_history.push_back(E);
            step = std::min(step * 1.5, 1e6);
            E = obj.value_and_gradient(x, grad);
        }
        if (!stage_done) {
            rep.converged = false;
            if (rep.message.empty()) rep.message = "iteration cap reached";
        }
    }

    rep.energy = obj.exact_value(x);
    rep.high_branch_frac =
        kind == Objective::FiniteLambda ? obj.high_branch_fraction(x) : 0.0;
    rep.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

    ScalarField out(g);
    obj.assemble_field(x, out);
    return {std::move(out), std::move(rep)};
}

}  // namespace

std::pair<ScalarField, SolveReport> minimize_finite_lambda(const ClampData& data,
                                                           const Grid2D& g,
                                                           const SolveConfig& cfg,
                                                           const ScalarField* init) {
    if (cfg.lambda <= 0.0)
        throw std::invalid_argument("minimize_finite_lambda: lambda must be > 0");
    return run_descent(Objective::FiniteLambda, data, g, cfg, init);
}

std::pair<ScalarField, SolveReport> minimize_limit(const ClampData& data, const Grid2D& g,
                                                   const SolveConfig& cfg,
                                                   const ScalarField* init) {
    return run_descent(Objective::Limit, data, g, cfg, init);
}

SweepResult lambda_sweep(const std::vector<std::pair<double, ClampData>>& bdata_per_lambda,
                         const Grid2D& g, const SolveConfig& cfg) {
    if (bdata_per_lambda.empty()) throw std::invalid_argument("lambda_sweep: empty lambda list");
    for (size_t i = 0; i + 1 < bdata_per_lambda.size(); ++i)
        if (bdata_per_lambda[i].first >= bdata_per_lambda[i + 1].first)
            throw std::invalid_argument("lambda_sweep: lambda list must be increasing");

    SweepResult res;
    // The limit solve uses the data of the largest lambda (the sweep target).
    const ClampData& limit_data = bdata_per_lambda.back().second;
    auto [u_inf, rep_inf] = minimize_limit(limit_data, g, cfg);
    res.limit_minimizer = u_inf;
    res.limit_report = rep_inf;

    const ScalarField f_field = clamped_extension(limit_data, g, cfg.extension_cg_iters);

    for (const auto& [lambda, data] : bdata_per_lambda) {
        SolveConfig c = cfg;
        c.lambda = lambda;
        auto [u_lam, rep] = minimize_finite_lambda(data, g, c, &u_inf);
        const EnergyParams p(lambda);
        SweepRow row;
        row.lambda = lambda;
        row.energy = rep.energy;
        row.limit_energy = rep_inf.energy;
        row.gap = row.energy - row.limit_energy;
        row.high_branch_frac = rep.high_branch_frac;
        const RecoveryResult rec = recovery_sequence(u_inf, f_field, lambda, cfg.recovery_c2);
        row.recovery_energy =
            energy_quadrature(rec.field, [&p](const Sym2d& m) { return g_lambda(m, p); });
        row.iters = rep.iters;
        row.wall_s = rep.wall_s;
        res.rows.push_back(row);
        res.minimizers.push_back(std::move(u_lam));
    }
    return res;
}

}  // namespace michell

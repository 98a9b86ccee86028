#include <CLI11.hpp>
#include <Eigen/Core>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <tuple>

#include "michell/airy.hpp"
#include "michell/config.hpp"
#include "michell/constructions.hpp"
#include "michell/density.hpp"
#include "michell/envelope.hpp"
#include "michell/grid.hpp"
#include "michell/solver.hpp"

namespace fs = std::filesystem;
using namespace michell;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitNoConverge = 2;

std::ofstream open_out(const fs::path& p) {
    if (!p.parent_path().empty()) fs::create_directories(p.parent_path());
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot open output file " + p.string());
    out.precision(17);
    return out;
}

void write_eigenvalue_maps(const ScalarField& u, const fs::path& dir, const std::string& stem) {
    const Grid2D& g = u.grid();
    const Sym2Field sigma = stress_from_potential(u);
    std::ofstream o1 = open_out(dir / (stem + "_sigma_eig1.csv"));
    std::ofstream o2 = open_out(dir / (stem + "_sigma_eig2.csv"));
    o1 << "# " << g.nx << " " << g.ny << " " << g.h << " " << g.ox << " " << g.oy << "\n";
    o2 << "# " << g.nx << " " << g.ny << " " << g.h << " " << g.ox << " " << g.oy << "\n";
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const auto [l1, l2] = eigenvalues(sigma.at(i, j));
            o1 << (i ? "," : "") << l1;
            o2 << (i ? "," : "") << l2;
        }
        o1 << "\n";
        o2 << "\n";
    }
}

int run_envelope(const std::vector<double>& lambdas, int n_xi, const fs::path& out_path) {
    std::ofstream out = open_out(out_path);
    out << "xi_a,xi_b,xi_d,lambda,f,qc_closed_form,rsym_k1,rsym_k2,rel_gap\n";
    for (double lambda : lambdas) {
        const EnergyParams p(lambda);
        const LaminationGrid grid = LaminationGrid::for_lambda(lambda);
        const DensityFn f = [&p](const Sym2d& m) { return f_lambda(m, p); };
        const double span = 0.6 * std::sqrt(lambda);
        for (int ix = 0; ix < n_xi; ++ix) {
            for (int iy = 0; iy < n_xi; ++iy) {
                const double x = -span + 2.0 * span * ix / (n_xi - 1);
                const double y = -span + 2.0 * span * iy / (n_xi - 1);
                const Sym2d xi = Sym2d::Diagonal(x, y);
                const double fv = f_lambda(xi, p);
                const double qc = qc_envelope(xi, p);
                const double r1 = rsym_iterate(f, xi, 1, grid);
                const double r2 = rsym_iterate(f, xi, 2, grid);
                const double gap = (r2 - qc) / std::max(std::abs(qc), 1e-12);
                out << xi.a << "," << xi.b << "," << xi.d << "," << lambda << "," << fv << ","
                    << qc << "," << r1 << "," << r2 << "," << gap << "\n";
            }
        }
    }
    return kExitOk;
}

int run_laminate_1d(double alpha, double beta, double t, int k, int n, const fs::path& dir) {
    LaminateSpec spec;
    spec.alpha = alpha;
    spec.beta = beta;
    spec.t = t;
    spec.k = k;
    const SampledProfile prof = laminate_1d(spec, n);
    std::ofstream out = open_out(dir / "laminate_profile.csv");
    out << "x,u,du,ddu\n";
    for (int i = 0; i < prof.n; ++i)
        out << prof.x[i] << "," << prof.u[i] << "," << prof.du[i] << "," << prof.ddu[i] << "\n";

    // Histogram of the second-derivative values.
    std::ofstream hist = open_out(dir / "laminate_hessian_hist.csv");
    hist << "value,count\n";
    std::map<double, int> counts;
    for (int i = 0; i < prof.n; ++i) counts[prof.ddu[i]]++;
    for (const auto& [v, c] : counts) hist << v << "," << c << "\n";
    return kExitOk;
}

int run_laminate_2d(const Sym2d& xi1, const Sym2d& xi2, double t, int k, double eps_margin,
                    int grid_n, const fs::path& dir) {
    const ScalarField u = build_laminate_2d(xi1, xi2, t, k, eps_margin, grid_n);
    write_field_csv(u, (dir / "laminate_field.csv").string());
    std::ofstream hist = open_out(dir / "laminate_hessian_hist.csv");
    hist << "xi_a,xi_b,xi_d,count\n";
    std::map<std::tuple<double, double, double>, int> counts;
    const Grid2D& g = u.grid();
    auto quantize = [](double v) { return std::round(v * 1e6) / 1e6; };
    for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i) {
            const Sym2d H = discrete_hessian(u, i, j);
            counts[{quantize(H.a), quantize(H.b), quantize(H.d)}]++;
        }
    for (const auto& [key, c] : counts)
        hist << std::get<0>(key) << "," << std::get<1>(key) << "," << std::get<2>(key) << ","
             << c << "\n";
    return kExitOk;
}

int run_boundary(const ProblemConfig& cfg, const fs::path& dir) {
    const Grid2D g = cfg.make_grid();
    const BoundaryCurve curve = BoundaryCurve::from_grid(g);
    if (cfg.kind == ProblemConfig::LoadKind::Points) {
        const BoundaryLoad load = BoundaryLoad::from_points(cfg.points);
        // Report which balance integral fails before converting.
        Eigen::Vector2d resultant = Eigen::Vector2d::Zero();
        double moment = 0.0, scale = 0.0;
        for (const auto& pl : cfg.points) {
            resultant += pl.v;
            moment += -pl.x.y() * pl.v.x() + pl.x.x() * pl.v.y();
            scale += pl.v.norm();
        }
        if (scale > 0.0 && resultant.norm() > 1e-9 * scale) {
            std::cerr << "boundary: unbalanced load, resultant force integral = ("
                      << resultant.x() << ", " << resultant.y() << ") != 0\n";
            return kExitInvalid;
        }
        if (scale > 0.0 && std::abs(moment) > 1e-9 * scale) {
            std::cerr << "boundary: unbalanced load, moment integral (x-perp test) = " << moment
                      << " != 0\n";
            return kExitInvalid;
        }
        (void)load;
    }
    const BoundaryData bd = cfg.boundary_data_curve(curve);
    std::ofstream out = open_out(dir / "boundary_data.csv");
    out << "vertex,arc_length,f1,f2\n";
    for (int k = 0; k < curve.size(); ++k)
        out << k << "," << curve.arc[k] << "," << bd.f1[k] << "," << bd.f2[k] << "\n";
    return kExitOk;
}

int run_solve(const ProblemConfig& cfg, bool limit, double lambda, const fs::path& dir) {
    const Grid2D g = cfg.make_grid();
    const ClampData data = cfg.boundary_data(g);
    SolveConfig sc = cfg.solve;
    if (lambda > 0.0) sc.lambda = lambda;

    auto [u, rep] = limit ? minimize_limit(data, g, sc) : minimize_finite_lambda(data, g, sc);
    write_field_csv(u, (dir / (limit ? "limit_minimizer.csv" : "minimizer.csv")).string());
    write_eigenvalue_maps(u, dir, limit ? "limit" : "finite");

    std::ofstream rout = open_out(dir / "solve_report.txt");
    rout << "objective: " << (limit ? "limit" : "finite_lambda") << "\n";
    if (!limit) rout << "lambda: " << sc.lambda << "\n";
    rout << "energy: " << rep.energy << "\n"
         << "grad_norm: " << rep.grad_norm << "\n"
         << "iters: " << rep.iters << "\n"
         << "high_branch_frac: " << rep.high_branch_frac << "\n"
         << "wall_s: " << rep.wall_s << "\n"
         << "converged: " << (rep.converged ? "yes" : "no") << "\n";
    if (!rep.message.empty()) rout << "message: " << rep.message << "\n";

    std::cout << (limit ? "limit" : "finite") << " energy " << rep.energy << " (iters "
              << rep.iters << ", |grad| " << rep.grad_norm << ")\n";
    if (!rep.converged) {
        std::cerr << "solve: did not converge: " << rep.message << "\n";
        return kExitNoConverge;
    }
    return kExitOk;
}

int run_sweep(const ProblemConfig& cfg, const fs::path& dir) {
    const Grid2D g = cfg.make_grid();
    const ClampData data = cfg.boundary_data(g);
    std::vector<std::pair<double, ClampData>> per_lambda;
    for (double l : cfg.lambdas) per_lambda.emplace_back(l, data);

    const SweepResult res = lambda_sweep(per_lambda, g, cfg.solve);

    std::ofstream out = open_out(dir / "sweep.csv");
    out << "lambda,energy,limit_energy,gap,high_branch_frac,recovery_energy,iters,wall_s\n";
    for (const auto& r : res.rows)
        out << r.lambda << "," << r.energy << "," << r.limit_energy << "," << r.gap << ","
            << r.high_branch_frac << "," << r.recovery_energy << "," << r.iters << ","
            << r.wall_s << "\n";

    write_field_csv(res.limit_minimizer, (dir / "limit_minimizer.csv").string());
    write_eigenvalue_maps(res.limit_minimizer, dir, "limit");
    for (size_t i = 0; i < res.rows.size(); ++i) {
        const std::string stem = "minimizer_lambda_" + std::to_string(res.rows[i].lambda);
        write_field_csv(res.minimizers[i], (dir / (stem + ".csv")).string());
        write_eigenvalue_maps(res.minimizers[i], dir, stem);
    }
    std::cout << "sweep: " << res.rows.size() << " rows written to " << (dir / "sweep.csv")
              << "\n";
    return kExitOk;
}

struct VerifyCounter {
    int passed = 0;
    int failed = 0;
    void check(const std::string& name, bool ok) {
        (ok ? passed : failed)++;
        std::cout << (ok ? "[pass] " : "[FAIL] ") << name << "\n";
    }
};

int run_verify(unsigned seed) {
    VerifyCounter vc;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    auto random_sym = [&](double scale) {
        return Sym2d(scale * unit(rng), scale * unit(rng), scale * unit(rng));
    };

    {  // tensor algebra invariants
        bool bounds = true, rot = true, sub = true, hom = true, dprod = true, invol = true;
        for (int it = 0; it < 100000; ++it) {
            const Sym2d m = random_sym(10.0);
            const double r0 = rho0(m), nm = norm(m);
            bounds = bounds && nm <= r0 + 1e-12 && r0 <= 2.0 * nm + 1e-12;
            const Sym2d c = cof(cof(m));
            invol = invol && c.a == m.a && c.b == m.b && c.d == m.d;
            const auto [l1, l2] = eigenvalues(m);
            dprod = dprod && std::abs(l1 * l2 - det(m)) <= 1e-12 * std::max(1.0, std::abs(det(m)));
            if (it % 10 == 0) {
                const double th = M_PI * unit(rng);
                rot = rot && std::abs(rho0(conjugate(m, th)) - r0) <= 1e-12 * (1.0 + r0);
                const Sym2d m2 = random_sym(10.0);
                sub = sub && rho0(m + m2) <= r0 + rho0(m2) + 1e-12;
                const double cpos = std::abs(unit(rng)) * 3.0;
                hom = hom && std::abs(rho0(cpos * m) - cpos * r0) <= 1e-12 * (1.0 + cpos * r0);
            }
        }
        vc.check("sym2: |m| <= rho0 <= 2|m| on 1e5 samples", bounds);
        vc.check("sym2: rho0 rotation invariant", rot);
        vc.check("sym2: rho0 sublinear + 1-homogeneous", sub && hom);
        vc.check("sym2: det = eigenvalue product", dprod);
        vc.check("sym2: cof is an involution", invol);
    }

    {  // density inequality suite
        bool eq3 = true, env = true, low = true, scaling = true, tri = true;
        for (double lambda : {1.0, 10.0, 100.0}) {
            const EnergyParams p(lambda);
            const EnergyParams p1(1.0);
            const double sq = std::sqrt(lambda);
            for (int it = 0; it < 100000; ++it) {
                const Sym2d xi = random_sym(2.0 * sq);
                const double gl = g_lambda(xi, p);
                eq3 = eq3 && 0.5 * rho0(xi) <= gl + 1e-10;
                env = env && qc_envelope(xi, p) <= f_lambda(xi, p) + 1e-10;
                if (rho0(xi) <= sq) low = low && gl <= 2.0 * rho0(xi) + 1e-10;
                const double lhs = qc_envelope(xi, p);
                const double rhs = lambda * qc_envelope(xi * (1.0 / sq), p1);
                scaling = scaling && std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(lhs));
                if (it % 10 == 0) {
                    const Sym2d B = random_sym(2.0 * sq);
                    tri = tri &&
                          g_lambda(xi + B, p) <= 16.0 * (gl + g_lambda(B, p)) + 1e-10;
                }
            }
        }
        vc.check("density: 1/2 rho0 <= G_lambda", eq3);
        vc.check("density: envelope <= F_lambda", env);
        vc.check("density: low branch G_lambda <= 2 rho0", low);
        vc.check("density: scaling law exact to 1e-12", scaling);
        vc.check("density: quasi-triangle with C = 16", tri);
    }

    {  // airy identity
        const Grid2D g = unit_square_grid(64);
        bool ok = true;
        for (int trial = 0; trial < 5; ++trial) {
            ScalarField u(g);
            for (int j = -2; j <= g.ny + 1; ++j)
                for (int i = -2; i <= g.nx + 1; ++i) u(i, j) = unit(rng);
            u.set_ghosts_populated(true);
            const Sym2Field sigma = stress_from_potential(u);
            const double scale =
                std::max({sigma.a.abs().maxCoeff(), sigma.b.abs().maxCoeff(),
                          sigma.d.abs().maxCoeff()}) / g.h;
            ok = ok && stress_divergence_max(sigma, g) <= 1e-12 * scale;
        }
        vc.check("airy: div cof hessian = 0 to 1e-12", ok);
    }

    {  // envelope oracle (small sample)
        bool exact = true, search = true;
        for (double lambda : {1.0, 4.0}) {
            const EnergyParams p(lambda);
            const LaminationGrid grid = LaminationGrid::for_lambda(lambda);
            const DensityFn f = [&p](const Sym2d& m) { return f_lambda(m, p); };
            for (int it = 0; it < 10; ++it) {
                const double sq = std::sqrt(lambda);
                double x = 0.8 * sq * unit(rng), y = 0.8 * sq * unit(rng);
                const double r0 = std::abs(x) + std::abs(y);
                if (r0 < 0.05 * sq || r0 > 0.9 * sq) continue;
                const Sym2d xi = Sym2d::Diagonal(x, y);
                const double qc = qc_envelope(xi, p);
                exact = exact && std::abs(rsgl_split(xi, lambda).value - qc) <= 1e-12 * qc;
                search = search && std::abs(rsym_iterate(f, xi, 2, grid) - qc) <= 1e-2 * qc;
            }
        }
        vc.check("envelope: rsgl split matches closed form to 1e-12", exact);
        vc.check("envelope: k=2 lamination search within 1e-2", search);
    }

    {  // gradient checks
        const Grid2D g = unit_square_grid(16);
        const ClampData data = ClampData::from_potential(
            g, [](double x, double y) { return 0.5 * (x * x - y * y) + 0.3 * x * y; },
            [](double x, double y) { return x + 0.3 * y; },
            [](double x, double y) { return 0.3 * x - y; });
        bool ok = true;
        for (Objective kind : {Objective::FiniteLambda, Objective::Limit}) {
            DiscreteObjective obj(kind, g, data, EnergyParams(25.0, 1e-2));
            Eigen::VectorXd x0(obj.dof_count());
            for (int i = 0; i < x0.size(); ++i) x0[i] = 0.1 * unit(rng);
            Eigen::VectorXd grad(x0.size());
            obj.value_and_gradient(x0, grad);
            for (int trial = 0; trial < 10; ++trial) {
                const int k = static_cast<int>((unit(rng) * 0.5 + 0.5) * (x0.size() - 1));
                const double h = 1e-6;
                Eigen::VectorXd xp = x0, xm = x0;
                xp[k] += h;
                xm[k] -= h;
                const double fd = (obj.value(xp) - obj.value(xm)) / (2.0 * h);
                ok = ok && std::abs(fd - grad[k]) <= 1e-4 * (1.0 + std::abs(fd));
            }
        }
        vc.check("solver: objective gradients match finite differences", ok);
    }

    {  // boundary integral machinery
        const BoundaryCurve circle = BoundaryCurve::circle({0.0, 0.0}, 1.0, 2048);
        Eigen::ArrayXd v(circle.size());
        for (int k = 0; k < circle.size(); ++k)
            v[k] = std::sin(2.0 * M_PI * circle.arc[k] / circle.length);
        const Eigen::ArrayXd phi = phi_integral(v, circle);
        double err = 0.0;
        const double L = circle.length;
        for (int k = 0; k < circle.size(); ++k) {
            const double exact = -(L / (2.0 * M_PI)) * std::cos(2.0 * M_PI * circle.arc[k] / L);
            err = std::max(err, std::abs(phi[k] - exact));
        }
        vc.check("airy: phi_integral matches antiderivative on the circle",
                 err <= 10.0 / (2048.0 * 2048.0));
        vc.check("constructions: q_offset double-integral residual",
                 [&] {
                     for (double t : {0.1, 0.3, 0.5, 0.7, 0.9}) {
                         const LaminateWave w(t, q_offset(t), 1.0);
                         if (std::abs(w.period_psi_integral()) > 1e-12) return false;
                     }
                     return true;
                 }());
    }

    std::cout << vc.passed << " passed, " << vc.failed << " failed\n";
    return vc.failed == 0 ? kExitOk : kExitInvalid;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"2D compliance relaxation and Michell limit toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    int threads = 1;
    unsigned seed = 1;
    app.add_option("--config", config_path, "problem definition file");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--threads", threads, "worker threads (1 = deterministic)");
    app.add_option("--seed", seed, "random seed");

    auto* env_cmd = app.add_subcommand("envelope", "tabulate F, its envelope and the "
                                                   "lamination search over a xi grid");
    std::vector<double> env_lambdas = {4.0};
    int env_n = 5;
    env_cmd->add_option("--lambda", env_lambdas, "lambda values");
    env_cmd->add_option("--grid", env_n, "xi samples per axis");

    auto* lam_cmd = app.add_subcommand("laminate", "emit laminate profiles or fields");
    double lam_alpha = 2.0, lam_beta = 0.0, lam_t = 0.5, lam_eps = 0.05;
    int lam_k = 16, lam_n = 2048, lam_grid = 129;
    std::vector<double> lam_xi1, lam_xi2;
    lam_cmd->add_option("--alpha", lam_alpha, "first second-derivative value (1d)");
    lam_cmd->add_option("--beta", lam_beta, "second second-derivative value (1d)");
    lam_cmd->add_option("--t", lam_t, "volume fraction");
    lam_cmd->add_option("--k", lam_k, "oscillation periods");
    lam_cmd->add_option("--n", lam_n, "1d sample count");
    lam_cmd->add_option("--xi1", lam_xi1, "2d mode: a b d of the first Hessian")
        ->expected(3);
    lam_cmd->add_option("--xi2", lam_xi2, "2d mode: a b d of the second Hessian")
        ->expected(3);
    lam_cmd->add_option("--eps-margin", lam_eps, "2d boundary cutoff width");
    lam_cmd->add_option("--grid", lam_grid, "2d grid nodes per side");

    auto* bnd_cmd = app.add_subcommand("boundary", "traction to clamped-plate boundary data");

    auto* solve_cmd = app.add_subcommand("solve", "minimize a single functional");
    double solve_lambda = 0.0;
    bool solve_limit = false;
    int solve_grid = 0;
    solve_cmd->add_option("--lambda", solve_lambda, "weight multiplier (finite solve)");
    solve_cmd->add_flag("--limit", solve_limit, "minimize the limit functional");
    solve_cmd->add_option("--grid", solve_grid, "override grid resolution");

    auto* sweep_cmd = app.add_subcommand("sweep", "lambda sweep with limit comparison");
    int sweep_grid = 0;
    sweep_cmd->add_option("--grid", sweep_grid, "override grid resolution");

    auto* verify_cmd = app.add_subcommand("verify", "run the invariant suite");

    CLI11_PARSE(app, argc, argv);

    try {
        const fs::path dir(out_dir);
        if (env_cmd->parsed())
            return run_envelope(env_lambdas, env_n, dir / "envelope.csv");
        if (lam_cmd->parsed()) {
            if (!lam_xi1.empty() || !lam_xi2.empty()) {
                if (lam_xi1.size() != 3 || lam_xi2.size() != 3) {
                    std::cerr << "laminate: both --xi1 and --xi2 need 3 entries\n";
                    return kExitInvalid;
                }
                return run_laminate_2d({lam_xi1[0], lam_xi1[1], lam_xi1[2]},
                                       {lam_xi2[0], lam_xi2[1], lam_xi2[2]}, lam_t, lam_k,
                                       lam_eps, lam_grid, dir);
            }
            return run_laminate_1d(lam_alpha, lam_beta, lam_t, lam_k, lam_n, dir);
        }
        if (verify_cmd->parsed()) return run_verify(seed);

        // The remaining subcommands need a problem definition.
        if (config_path.empty()) {
            std::cerr << "missing --config PATH\n";
            return kExitInvalid;
        }
        ProblemConfig cfg = ProblemConfig::load(config_path);
        cfg.solve.threads = threads;
        cfg.solve.seed = seed;
        if (bnd_cmd->parsed()) return run_boundary(cfg, dir);
        if (solve_cmd->parsed()) {
            if (solve_grid > 0) cfg.grid_n = solve_grid;
            return run_solve(cfg, solve_limit, solve_lambda, dir);
        }
        if (sweep_cmd->parsed()) {
            if (sweep_grid > 0) cfg.grid_n = sweep_grid;
            return run_sweep(cfg, dir);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
    return kExitOk;
}

#include "michell/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace michell {

namespace {

[[noreturn]] void fail(const std::string& path, int line, const std::string& msg) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<double> parse_numbers(const std::string& path, int line, const std::string& v,
                                  size_t expect = 0) {
    std::istringstream in(v);
    std::vector<double> out;
    double x;
    while (in >> x) out.push_back(x);
    std::string rest;
    if (in.clear(), in >> rest)
        fail(path, line, "trailing non-numeric token '" + rest + "'");
    if (expect && out.size() != expect)
        fail(path, line, "expected " + std::to_string(expect) + " numbers, got " +
                             std::to_string(out.size()));
    return out;
}

}  // namespace

ProblemConfig ProblemConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);

    ProblemConfig cfg;
    std::string section;
    std::string raw;
    int lineno = 0;
    bool have_load_type = false;

    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail(path, lineno, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(path, lineno, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));

        if (section == "domain") {
            if (key == "origin") {
                const auto v = parse_numbers(path, lineno, val, 2);
                cfg.ox = v[0];
                cfg.oy = v[1];
            } else if (key == "width") {
                cfg.width = parse_numbers(path, lineno, val, 1)[0];
                if (cfg.width <= 0) fail(path, lineno, "width must be > 0");
            } else if (key == "height") {
                cfg.height = parse_numbers(path, lineno, val, 1)[0];
                if (cfg.height <= 0) fail(path, lineno, "height must be > 0");
            } else {
                fail(path, lineno, "unknown domain key '" + key + "'");
            }
        } else if (section == "grid") {
            if (key == "n") {
                cfg.grid_n = static_cast<int>(parse_numbers(path, lineno, val, 1)[0]);
                if (cfg.grid_n < 4) fail(path, lineno, "grid n must be >= 4");
            } else {
                fail(path, lineno, "unknown grid key '" + key + "'");
            }
        } else if (section == "load") {
            if (key == "type") {
                have_load_type = true;
                if (val == "quadratic")
                    cfg.kind = LoadKind::Quadratic;
                else if (val == "points")
                    cfg.kind = LoadKind::Points;
                else if (val == "traction_csv")
                    cfg.kind = LoadKind::TractionCsv;
                else
                    fail(path, lineno, "unknown load type '" + val + "'");
            } else if (key == "hessian") {
                const auto v = parse_numbers(path, lineno, val, 3);
                cfg.hessian = Sym2d(v[0], v[1], v[2]);
            } else if (key == "point") {
                const auto v = parse_numbers(path, lineno, val, 4);
                cfg.points.push_back({{v[0], v[1]}, {v[2], v[3]}});
            } else if (key == "file") {
                cfg.traction_csv = val;
            } else {
                fail(path, lineno, "unknown load key '" + key + "'");
            }
        } else if (section == "solver") {
            if (key == "smoothing") {
                cfg.solve.smoothing = parse_numbers(path, lineno, val);
                if (cfg.solve.smoothing.empty()) fail(path, lineno, "empty smoothing list");
            } else if (key == "max_iters") {
                cfg.solve.max_iters = static_cast<int>(parse_numbers(path, lineno, val, 1)[0]);
            } else if (key == "grad_tol") {
                cfg.solve.grad_tol = parse_numbers(path, lineno, val, 1)[0];
            } else if (key == "lambda") {
                cfg.solve.lambda = parse_numbers(path, lineno, val, 1)[0];
                if (cfg.solve.lambda <= 0) fail(path, lineno, "lambda must be > 0");
            } else if (key == "seed") {
                cfg.solve.seed = static_cast<unsigned>(parse_numbers(path, lineno, val, 1)[0]);
            } else if (key == "init_perturb") {
                cfg.solve.init_perturb = parse_numbers(path, lineno, val, 1)[0];
            } else if (key == "extension_cg_iters") {
                cfg.solve.extension_cg_iters =
                    static_cast<int>(parse_numbers(path, lineno, val, 1)[0]);
            } else if (key == "recovery_c2") {
                cfg.solve.recovery_c2 = parse_numbers(path, lineno, val, 1)[0];
            } else {
                fail(path, lineno, "unknown solver key '" + key + "'");
            }
        } else if (section == "sweep") {
            if (key == "lambdas") {
                cfg.lambdas = parse_numbers(path, lineno, val);
                for (size_t i = 0; i + 1 < cfg.lambdas.size(); ++i)
                    if (cfg.lambdas[i] >= cfg.lambdas[i + 1])
                        fail(path, lineno, "lambdas must be strictly increasing");
                for (double l : cfg.lambdas)
                    if (l <= 0) fail(path, lineno, "lambdas must be > 0");
            } else {
                fail(path, lineno, "unknown sweep key '" + key + "'");
            }
        } else if (section == "output") {
            if (key == "dir")
                cfg.out_dir = val;
            else
                fail(path, lineno, "unknown output key '" + key + "'");
        } else {
            fail(path, lineno, "key outside of a known section");
        }
    }

    if (cfg.kind == LoadKind::Points && cfg.points.empty() && have_load_type)
        throw std::runtime_error(path + ": load type 'points' needs at least one point line");
    try {
        cfg.solve.validate();
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    return cfg;
}

Grid2D ProblemConfig::make_grid() const {
    const double hx = width / (grid_n - 1);
    const double hy = height / (grid_n - 1);
    if (std::abs(hx - hy) > 1e-12 * hx)
        throw std::runtime_error(
            "config: non-square cells; grid n applies to both sides, so width must equal height");
    return Grid2D(grid_n, grid_n, hx, ox, oy);
}

ClampData ProblemConfig::boundary_data(const Grid2D& g) const {
    if (kind == LoadKind::Quadratic) {
        const Sym2d m = hessian;
        return ClampData::from_potential(
            g,
            [m](double x, double y) {
                return 0.5 * (m.a * x * x + 2.0 * m.b * x * y + m.d * y * y);
            },
            [m](double x, double y) { return m.a * x + m.b * y; },
            [m](double x, double y) { return m.b * x + m.d * y; });
    }
    const BoundaryCurve curve = BoundaryCurve::from_grid(g);
    const BoundaryData bd = boundary_data_curve(curve);
    return sample_boundary_data(bd, curve, g);
}

BoundaryData ProblemConfig::boundary_data_curve(const BoundaryCurve& curve) const {
    if (kind == LoadKind::Quadratic) {
        const int n = curve.size();
        BoundaryData bd;
        bd.f1.resize(n);
        bd.f2.resize(n);
        for (int k = 0; k < n; ++k) {
            const double x = curve.vertices[k].x(), y = curve.vertices[k].y();
            bd.f1[k] = 0.5 * (hessian.a * x * x + 2.0 * hessian.b * x * y + hessian.d * y * y);
            const Eigen::Vector2d grad(hessian.a * x + hessian.b * y,
                                       hessian.b * x + hessian.d * y);
            bd.f2[k] = grad.dot(curve.vert_n[k]);
        }
        return bd;
    }
    if (kind == LoadKind::Points)
        return boundary_data_from_traction(BoundaryLoad::from_points(points), curve);

    // traction_csv: one "x,y,gx,gy" row per curve vertex, in curve order.
    std::ifstream in(traction_csv);
    if (!in) throw std::runtime_error("cannot open traction file " + traction_csv);
    std::vector<Eigen::Vector2d> samples;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double x, y, gx, gy;
        if (!(ls >> x >> y >> gx >> gy))
            fail(traction_csv, lineno, "expected x,y,gx,gy");
        samples.emplace_back(gx, gy);
    }
    if (static_cast<int>(samples.size()) != curve.size())
        throw std::runtime_error(traction_csv + ": row count " +
                                 std::to_string(samples.size()) + " != boundary vertex count " +
                                 std::to_string(curve.size()));
    return boundary_data_from_traction(BoundaryLoad::from_samples(std::move(samples)), curve);
}

}  // namespace michell

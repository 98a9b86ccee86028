#include "michell/grid.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace michell {

Grid2D::Grid2D(int nx_, int ny_, double h_, double ox_, double oy_)
    : nx(nx_), ny(ny_), h(h_), ox(ox_), oy(oy_) {
    if (nx < 4 || ny < 4) throw std::invalid_argument("Grid2D: nx, ny must be >= 4");
    if (h <= 0.0) throw std::invalid_argument("Grid2D: h must be > 0");
    mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(ny, nx, true);
}

Grid2D unit_square_grid(int n) { return Grid2D(n, n, 1.0 / (n - 1)); }

void ScalarField::fill(const std::function<double(double, double)>& f) {
    for (int j = -2; j <= grid_.ny + 1; ++j)
        for (int i = -2; i <= grid_.nx + 1; ++i)
            (*this)(i, j) = f(grid_.x(i), grid_.y(j));
    ghosts_populated_ = true;
}

Sym2d discrete_hessian(const ScalarField& u, int i, int j) {
    if (!u.ghosts_populated())
        throw std::logic_error("discrete_hessian: ghost layers not populated");
    const double h2 = u.grid().h * u.grid().h;
    const double uxx = (u(i - 1, j) - 2.0 * u(i, j) + u(i + 1, j)) / h2;
    const double uyy = (u(i, j - 1) - 2.0 * u(i, j) + u(i, j + 1)) / h2;
    const double uxy =
        (u(i + 1, j + 1) - u(i + 1, j - 1) - u(i - 1, j + 1) + u(i - 1, j - 1)) / (4.0 * h2);
    return {uxx, uxy, uyy};
}

ClampData ClampData::zero(const Grid2D& g) {
    ClampData d;
    d.f1_bottom = Eigen::ArrayXd::Zero(g.nx);
    d.f1_top = Eigen::ArrayXd::Zero(g.nx);
    d.f1_left = Eigen::ArrayXd::Zero(g.ny);
    d.f1_right = Eigen::ArrayXd::Zero(g.ny);
    d.f2_bottom = Eigen::ArrayXd::Zero(g.nx);
    d.f2_top = Eigen::ArrayXd::Zero(g.nx);
    d.f2_left = Eigen::ArrayXd::Zero(g.ny);
    d.f2_right = Eigen::ArrayXd::Zero(g.ny);
    return d;
}

ClampData ClampData::from_potential(const Grid2D& g,
                                    const std::function<double(double, double)>& u,
                                    const std::function<double(double, double)>& ux,
                                    const std::function<double(double, double)>& uy) {
    ClampData d = zero(g);
    const double x0 = g.x(0), x1 = g.x(g.nx - 1);
    const double y0 = g.y(0), y1 = g.y(g.ny - 1);
    for (int i = 0; i < g.nx; ++i) {
        d.f1_bottom[i] = u(g.x(i), y0);
        d.f1_top[i] = u(g.x(i), y1);
        d.f2_bottom[i] = -uy(g.x(i), y0);
        d.f2_top[i] = uy(g.x(i), y1);
    }
    for (int j = 0; j < g.ny; ++j) {
        d.f1_left[j] = u(x0, g.y(j));
        d.f1_right[j] = u(x1, g.y(j));
        d.f2_left[j] = -ux(x0, g.y(j));
        d.f2_right[j] = ux(x1, g.y(j));
    }
    return d;
}

namespace {

// Cubic extrapolation weights: value at -1 and -2 from nodes 0..3.
inline double extrap1(double f0, double f1, double f2, double f3) {
    return 4.0 * f0 - 6.0 * f1 + 4.0 * f2 - f3;
}
inline double extrap2(double f0, double f1, double f2, double f3) {
    return 10.0 * f0 - 20.0 * f1 + 15.0 * f2 - 4.0 * f3;
}

}  // namespace

void apply_clamped_boundary(ScalarField& u, const ClampData& data, GhostMode mode) {
    const Grid2D& g = u.grid();
    const int nx = g.nx, ny = g.ny;
    const double h = g.h;

    for (int i = 0; i < nx; ++i) {
        u(i, 0) = data.f1_bottom[i];
        u(i, ny - 1) = data.f1_top[i];
    }
    for (int j = 0; j < ny; ++j) {
        u(0, j) = data.f1_left[j];
        u(nx - 1, j) = data.f1_right[j];
    }

    // Edge ghost layers. Clamped: centered normal difference across the
    // boundary equals f2, second layer by cubic extrapolation. Free: both
    // layers extrapolated from boundary + interior.
    for (int i = 0; i < nx; ++i) {
        if (mode == GhostMode::Clamped) {
            u(i, -1) = u(i, 1) + 2.0 * h * data.f2_bottom[i];
            u(i, -2) = extrap1(u(i, -1), u(i, 0), u(i, 1), u(i, 2));
            u(i, ny) = u(i, ny - 2) + 2.0 * h * data.f2_top[i];
            u(i, ny + 1) = extrap1(u(i, ny), u(i, ny - 1), u(i, ny - 2), u(i, ny - 3));
        } else {
            u(i, -1) = extrap1(u(i, 0), u(i, 1), u(i, 2), u(i, 3));
            u(i, -2) = extrap2(u(i, 0), u(i, 1), u(i, 2), u(i, 3));
            u(i, ny) = extrap1(u(i, ny - 1), u(i, ny - 2), u(i, ny - 3), u(i, ny - 4));
            u(i, ny + 1) = extrap2(u(i, ny - 1), u(i, ny - 2), u(i, ny - 3), u(i, ny - 4));
        }
    }
    for (int j = 0; j < ny; ++j) {
        if (mode == GhostMode::Clamped) {
            u(-1, j) = u(1, j) + 2.0 * h * data.f2_left[j];
            u(-2, j) = extrap1(u(-1, j), u(0, j), u(1, j), u(2, j));
            u(nx, j) = u(nx - 2, j) + 2.0 * h * data.f2_right[j];
            u(nx + 1, j) = extrap1(u(nx, j), u(nx - 1, j), u(nx - 2, j), u(nx - 3, j));
        } else {
            u(-1, j) = extrap1(u(0, j), u(1, j), u(2, j), u(3, j));
            u(-2, j) = extrap2(u(0, j), u(1, j), u(2, j), u(3, j));
            u(nx, j) = extrap1(u(nx - 1, j), u(nx - 2, j), u(nx - 3, j), u(nx - 4, j));
            u(nx + 1, j) = extrap2(u(nx - 1, j), u(nx - 2, j), u(nx - 3, j), u(nx - 4, j));
        }
    }

    // Corner ghost blocks by tangential extrapolation of the filled rows.
    for (int j : {-2, -1, ny, ny + 1}) {
        u(-1, j) = extrap1(u(0, j), u(1, j), u(2, j), u(3, j));
        u(-2, j) = extrap2(u(0, j), u(1, j), u(2, j), u(3, j));
        u(nx, j) = extrap1(u(nx - 1, j), u(nx - 2, j), u(nx - 3, j), u(nx - 4, j));
        u(nx + 1, j) = extrap2(u(nx - 1, j), u(nx - 2, j), u(nx - 3, j), u(nx - 4, j));
    }

    u.set_ghosts_populated(true);
}

double quad_weight(const Grid2D& g, int i, int j) {
    const double wx = (i == 0 || i == g.nx - 1) ? 0.5 : 1.0;
    const double wy = (j == 0 || j == g.ny - 1) ? 0.5 : 1.0;
    return wx * wy * g.h * g.h;
}

double energy_quadrature(const ScalarField& u,
                         const std::function<double(const Sym2d&)>& density) {
    const Grid2D& g = u.grid();
    double sum = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            sum += quad_weight(g, i, j) * density(discrete_hessian(u, i, j));
    return sum;
}

BoundaryTrace gamma1_trace(const ScalarField& u) {
    const Grid2D& g = u.grid();
    const double inv2h = 1.0 / (2.0 * g.h);
    BoundaryTrace t;
    t.bottom.resize(g.nx);
    t.top.resize(g.nx);
    t.left.resize(g.ny);
    t.right.resize(g.ny);
    for (int i = 0; i < g.nx; ++i) {
        t.bottom[i] = (u(i, -1) - u(i, 1)) * inv2h;
        t.top[i] = (u(i, g.ny) - u(i, g.ny - 2)) * inv2h;
    }
    for (int j = 0; j < g.ny; ++j) {
        t.left[j] = (u(-1, j) - u(1, j)) * inv2h;
        t.right[j] = (u(g.nx, j) - u(g.nx - 2, j)) * inv2h;
    }
    return t;
}

double boundary_penalty(const ScalarField& u, const ClampData& data, double smooth_eps) {
    const Grid2D& g = u.grid();
    const BoundaryTrace t = gamma1_trace(u);
    auto absval = [smooth_eps](double x) {
        return smooth_eps > 0.0 ? std::sqrt(x * x + smooth_eps * smooth_eps) : std::abs(x);
    };
    double sum = 0.0;
    for (int i = 0; i < g.nx; ++i) {
        const double w = (i == 0 || i == g.nx - 1) ? 0.5 : 1.0;
        sum += w * absval(t.bottom[i] - data.f2_bottom[i]);
        sum += w * absval(t.top[i] - data.f2_top[i]);
    }
    for (int j = 0; j < g.ny; ++j) {
        const double w = (j == 0 || j == g.ny - 1) ? 0.5 : 1.0;
        sum += w * absval(t.left[j] - data.f2_left[j]);
        sum += w * absval(t.right[j] - data.f2_right[j]);
    }
    return 2.0 * g.h * sum;
}

void write_field_csv(const ScalarField& u, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_field_csv: cannot open " + path);
    const Grid2D& g = u.grid();
    out.precision(17);
    out << "# " << g.nx << " " << g.ny << " " << g.h << " " << g.ox << " " << g.oy << "\n";
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (i) out << ",";
            out << u(i, j);
        }
        out << "\n";
    }
}

ScalarField read_field_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_field_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.empty() || line[0] != '#')
        throw std::runtime_error("read_field_csv: missing header line in " + path);
    int nx, ny;
    double h, ox, oy;
    {
        std::istringstream hs(line.substr(1));
        if (!(hs >> nx >> ny >> h >> ox >> oy))
            throw std::runtime_error("read_field_csv: malformed header in " + path);
    }
    ScalarField u(Grid2D(nx, ny, h, ox, oy));
    for (int j = 0; j < ny; ++j) {
        if (!std::getline(in, line))
            throw std::runtime_error("read_field_csv: truncated file " + path);
        std::istringstream ls(line);
        std::string cell;
        for (int i = 0; i < nx; ++i) {
            if (!std::getline(ls, cell, ','))
                throw std::runtime_error("read_field_csv: short row in " + path);
            u(i, j) = std::stod(cell);
        }
    }
    return u;
}

}  // namespace michell

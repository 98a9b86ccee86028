#ifndef MICHELL_GRID_HPP
#define MICHELL_GRID_HPP

#include <Eigen/Core>
#include <functional>
#include <string>

#include "michell/sym2.hpp"

namespace michell {

/// Uniform rectangular grid with square cells. Node (i, j) sits at
/// (ox + i h, oy + j h), i in [0, nx), j in [0, ny).
struct Grid2D {
    int nx = 0;
    int ny = 0;
    double h = 0.0;
    double ox = 0.0;
    double oy = 0.0;
    /// Per-node inside flag; all-inside for rectangles. Kept in the data
    /// model for masked domains, the shipped solvers use rectangles only.
    Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> mask;

    Grid2D() = default;
    Grid2D(int nx_, int ny_, double h_, double ox_ = 0.0, double oy_ = 0.0);

    double x(int i) const { return ox + i * h; }
    double y(int j) const { return oy + j * h; }
    double width() const { return (nx - 1) * h; }
    double height() const { return (ny - 1) * h; }
};

/// Build a grid with n x n nodes covering [0,1]^2.
Grid2D unit_square_grid(int n);

/// Scalar field on a Grid2D with a 2-deep ghost layer on each side.
/// Ghosts must be populated (flag checked) before Hessian evaluation.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const Grid2D& g)
        : grid_(g), values_(Eigen::ArrayXXd::Zero(g.ny + 4, g.nx + 4)) {}

    const Grid2D& grid() const { return grid_; }

    /// Node access, i in [-2, nx+1], j in [-2, ny+1].
    double& operator()(int i, int j) { return values_(j + 2, i + 2); }
    double operator()(int i, int j) const { return values_(j + 2, i + 2); }

    bool ghosts_populated() const { return ghosts_populated_; }
    void set_ghosts_populated(bool v) { ghosts_populated_ = v; }

    Eigen::ArrayXXd& raw() { return values_; }
    const Eigen::ArrayXXd& raw() const { return values_; }

    /// Fill every node (ghosts included) from a closed-form function and
    /// mark the ghosts populated.
    void fill(const std::function<double(double, double)>& f);

private:
    Grid2D grid_;
    Eigen::ArrayXXd values_;
    bool ghosts_populated_ = false;
};

/// Centered second differences; the mixed derivative is the symmetric
/// four-point cross so that the discrete partials commute exactly.
Sym2d discrete_hessian(const ScalarField& u, int i, int j);

/// Boundary samples on the four edges of a rectangular grid. f1 holds the
/// clamped value, f2 the outward normal derivative; corners are duplicated
/// between adjacent edges and must agree in f1.
struct ClampData {
    Eigen::ArrayXd f1_bottom, f1_top;  // length nx
    Eigen::ArrayXd f1_left, f1_right;  // length ny
    Eigen::ArrayXd f2_bottom, f2_top;
    Eigen::ArrayXd f2_left, f2_right;

    static ClampData zero(const Grid2D& g);
    /// Sample traces of a closed-form potential (value and outward normal
    /// derivative of u) on the grid boundary.
    static ClampData from_potential(const Grid2D& g,
                                    const std::function<double(double, double)>& u,
                                    const std::function<double(double, double)>& ux,
                                    const std::function<double(double, double)>& uy);
};

enum class GhostMode {
    Clamped,  ///< boundary = f1, ghost layer enforces gamma_1 = f2
    Free,     ///< boundary = f1, ghosts extrapolated from the interior
};

/// Set boundary nodes to f1 and fill both ghost layers. In Clamped mode the
/// first ghost layer is chosen so the centered normal difference equals f2;
/// in Free mode ghosts are one-sided extrapolants and gamma_1 is left to
/// the functional's penalty term. Interior nodes are untouched. Idempotent.
void apply_clamped_boundary(ScalarField& u, const ClampData& data,
                            GhostMode mode = GhostMode::Clamped);

/// Trapezoidal area weight of node (i, j): h^2 scaled by 1/2 per boundary
/// direction.
double quad_weight(const Grid2D& g, int i, int j);

/// h^2-weighted trapezoidal sum of density(discrete_hessian) over all
/// nodes. Exact for constant integrands.
double energy_quadrature(const ScalarField& u,
                         const std::function<double(const Sym2d&)>& density);

/// Outward normal derivative trace along each edge via the centered ghost
/// difference (equals the second-order one-sided formula in Free mode).
/// Order of entries matches the ClampData edge arrays.
struct BoundaryTrace {
    Eigen::ArrayXd bottom, top, left, right;
};
BoundaryTrace gamma1_trace(const ScalarField& u);

/// 2 * integral over the boundary of |gamma_1(u) - f2| by the composite
/// trapezoid rule per edge with corner weights 1/2. `smooth_eps > 0`
/// replaces |.| by the pseudo-Huber surrogate.
double boundary_penalty(const ScalarField& u, const ClampData& data,
                        double smooth_eps = 0.0);

/// CSV matrix I/O: one sidecar header line `# nx ny h ox oy`, then ny rows
/// of nx comma-separated values (row j = 0 first). Interior nodes only.
void write_field_csv(const ScalarField& u, const std::string& path);
ScalarField read_field_csv(const std::string& path);

}  // namespace michell

#endif

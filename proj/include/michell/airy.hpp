#ifndef MICHELL_AIRY_HPP
#define MICHELL_AIRY_HPP

#include <Eigen/Core>
#include <vector>

#include "michell/grid.hpp"
#include "michell/sym2.hpp"

namespace michell {

/// Closed positively oriented polyline approximating the domain boundary.
/// Segment k runs from vertex k to vertex (k+1) mod size(); tangents and
/// outward normals satisfy tau = (-n2, n1) per segment. Vertex normals are
/// the normalized average of the adjacent segments unless a constructor
/// supplies exact ones.
struct BoundaryCurve {
    std::vector<Eigen::Vector2d> vertices;
    std::vector<double> seg_len;
    std::vector<Eigen::Vector2d> seg_tau, seg_n;
    std::vector<Eigen::Vector2d> vert_tau, vert_n;
    std::vector<double> arc;  ///< arc length of vertex k measured from vertex 0
    double length = 0.0;
    /// Grid node per vertex when built by from_grid, else empty.
    std::vector<std::pair<int, int>> grid_nodes;

    int size() const { return static_cast<int>(vertices.size()); }
    /// Trapezoidal arc-length weight of vertex k.
    double weight(int k) const;

    static BoundaryCurve from_polyline(std::vector<Eigen::Vector2d> pts);
    static BoundaryCurve rectangle(double x0, double y0, double w, double h,
                                   int nx, int ny);
    static BoundaryCurve circle(const Eigen::Vector2d& center, double radius, int n);
    /// Walk of the boundary nodes of a rectangular grid, counterclockwise
    /// from node (0, 0), with the vertex -> node map filled in.
    static BoundaryCurve from_grid(const Grid2D& g);
};

struct PointLoad {
    Eigen::Vector2d x;  ///< application point, must lie on a curve vertex
    Eigen::Vector2d v;  ///< force vector
};

/// Traction data on the boundary: either per-vertex sampled densities
/// (force per unit length) or a finite list of point loads.
struct BoundaryLoad {
    std::vector<Eigen::Vector2d> sampled;
    std::vector<PointLoad> points;

    bool is_points() const { return !points.empty(); }
    static BoundaryLoad from_samples(std::vector<Eigen::Vector2d> g);
    static BoundaryLoad from_points(std::vector<PointLoad> p);
};

/// Clamped-plate boundary data per curve vertex: f1 the clamped value,
/// f2 the outward normal derivative.
struct BoundaryData {
    Eigen::ArrayXd f1, f2;
};

/// True iff the resultant force and moment vanish relative to the total
/// load magnitude. Mirrors testing against the rigid motions (1,0), (0,1)
/// and x^perp.
bool balance_check(const BoundaryLoad& load, const BoundaryCurve& curve,
                   double tol = 1e-9);

/// Cumulative trapezoidal arc-length integral from vertex 0, shifted so the
/// output has zero arc-length mean. Input must have zero mean within
/// mean_tol * scale; the output is then continuous around the closed curve.
Eigen::ArrayXd phi_integral(const Eigen::ArrayXd& values, const BoundaryCurve& curve,
                            double mean_tol = 1e-8);

/// Remove the trace of the best-fit affine function from (f1, f2) in the
/// weighted discrete L2 product, making outputs deterministic across base
/// point choices.
void project_out_affine(BoundaryData& data, const BoundaryCurve& curve);

/// Traction -> clamped-plate data: f1 = -(g_perp)^(2), f2 = -(g_perp)^(1) . n,
/// the integrals taken along the boundary with the zero-mean convention and
/// the affine part projected out. Requires a balanced load.
BoundaryData boundary_data_from_traction(const BoundaryLoad& load,
                                         const BoundaryCurve& curve,
                                         double balance_tol = 1e-9);

/// Per-node symmetric tensor field on a grid.
struct Sym2Field {
    Eigen::ArrayXXd a, b, d;  // (ny x nx)
    Sym2d at(int i, int j) const { return {a(j, i), b(j, i), d(j, i)}; }
};

/// sigma = cof(discrete Hessian of u); divergence-free by construction.
Sym2Field stress_from_potential(const ScalarField& u);

/// Max norm of the centered-difference row divergence of sigma over the
/// interior, for the discrete div(cof(hessian)) = 0 identity.
double stress_divergence_max(const Sym2Field& sigma, const Grid2D& g);

/// Raw boundary integrals of a balanced point-load family (no mean shift,
/// no affine projection): the piecewise-constant first integral per
/// segment and the continuous piecewise-linear second integral per vertex.
struct PointLoadIntegrals {
    std::vector<Eigen::Vector2d> first_seg;   ///< (g_perp)^(1) on segment k
    Eigen::ArrayXd second;                    ///< (g_perp)^(2) at vertex k
    std::vector<int> load_vertex;             ///< curve vertex of each load
    std::vector<Eigen::Vector2d> first_after; ///< cumulative sum through load i
    Eigen::ArrayXd second_at_load;            ///< second integral at load i
};
PointLoadIntegrals point_load_integrals(const std::vector<PointLoad>& loads,
                                        const BoundaryCurve& curve);

/// Continuous piecewise-affine potential for balanced transversal point
/// loads: affine with slope F_i on the sector between consecutive load
/// segments, extended by a centroid fan inside the inner polygon.
class PointLoadPotential {
public:
    struct Piece {
        std::vector<Eigen::Vector2d> poly;  // CCW
        Eigen::Vector2d grad;
        double offset;  // u(x) = offset + grad . x
    };

    double eval(const Eigen::Vector2d& x) const;
    /// Rasterize onto a grid (ghosts included, pieces extended outward).
    ScalarField to_field(const Grid2D& g) const;
    /// 2 * sum over interior mesh edges of |gradient jump| * length; the
    /// limit-density mass of the piecewise-affine Hessian measure.
    double limit_energy() const;

    const std::vector<Piece>& sectors() const { return sectors_; }
    const std::vector<Piece>& fan() const { return fan_; }

    struct Edge {
        Eigen::Vector2d p, q;
        Eigen::Vector2d grad_left, grad_right;
        double offset_left, offset_right;
    };
    const std::vector<Edge>& interior_edges() const { return edges_; }

private:
    friend PointLoadPotential point_load_potential(const std::vector<PointLoad>&,
                                                   const BoundaryCurve&,
                                                   const std::vector<Eigen::Vector2d>&);
    std::vector<Piece> sectors_;
    std::vector<Piece> fan_;
    std::vector<Edge> edges_;
};

PointLoadPotential point_load_potential(const std::vector<PointLoad>& loads,
                                        const BoundaryCurve& curve,
                                        const std::vector<Eigen::Vector2d>& inner_polygon);

/// Inner polygon with one vertex per load at x_i + s eps v_i, pushed to the
/// interior side; eps relative to the pairwise load distances.
std::vector<Eigen::Vector2d> default_inner_polygon(const std::vector<PointLoad>& loads,
                                                   const BoundaryCurve& curve,
                                                   double eps_frac = 0.25);

/// Resample per-vertex boundary data of a from_grid curve into the per-edge
/// arrays used by apply_clamped_boundary.
ClampData sample_boundary_data(const BoundaryData& data, const BoundaryCurve& grid_curve,
                               const Grid2D& g);

}  // namespace michell

#endif

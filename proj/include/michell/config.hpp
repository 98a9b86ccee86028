#ifndef MICHELL_CONFIG_HPP
#define MICHELL_CONFIG_HPP

#include <string>
#include <vector>

#include "michell/airy.hpp"
#include "michell/grid.hpp"
#include "michell/solver.hpp"
#include "michell/sym2.hpp"

namespace michell {

/// Problem definition parsed from a flat key = value file with [section]
/// headers and # comments. Validation errors carry file:line positions.
struct ProblemConfig {
    // [domain]
    double ox = 0.0, oy = 0.0;
    double width = 1.0, height = 1.0;
    // [grid]
    int grid_n = 65;
    // [load]
    enum class LoadKind { Quadratic, Points, TractionCsv };
    LoadKind kind = LoadKind::Quadratic;
    Sym2d hessian = Sym2d::Diagonal(1.0, -1.0);  ///< quadratic-potential data
    std::vector<PointLoad> points;
    std::string traction_csv;
    // [solver]
    SolveConfig solve;
    // [sweep]
    std::vector<double> lambdas = {10.0, 100.0, 1000.0, 10000.0};
    // [output]
    std::string out_dir = ".";

    static ProblemConfig load(const std::string& path);

    Grid2D make_grid() const;
    /// Boundary data on the grid's boundary nodes per the load kind.
    ClampData boundary_data(const Grid2D& g) const;
    /// Polyline form of the same data (for the boundary subcommand).
    BoundaryData boundary_data_curve(const BoundaryCurve& curve) const;
};

}  // namespace michell

#endif

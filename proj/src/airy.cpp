#include "michell/airy.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace michell {

namespace {

Eigen::Vector2d perp(const Eigen::Vector2d& v) { return {-v.y(), v.x()}; }

double polygon_signed_area(const std::vector<Eigen::Vector2d>& p) {
    double s = 0.0;
    const int n = static_cast<int>(p.size());
    for (int k = 0; k < n; ++k) {
        const auto& a = p[k];
        const auto& b = p[(k + 1) % n];
        s += a.x() * b.y() - b.x() * a.y();
    }
    return 0.5 * s;
}

double point_segment_dist(const Eigen::Vector2d& x, const Eigen::Vector2d& a,
                          const Eigen::Vector2d& b) {
    const Eigen::Vector2d ab = b - a;
    const double t = std::clamp(ab.squaredNorm() > 0 ? (x - a).dot(ab) / ab.squaredNorm() : 0.0,
                                0.0, 1.0);
    return (x - (a + t * ab)).norm();
}

bool point_in_polygon(const Eigen::Vector2d& x, const std::vector<Eigen::Vector2d>& p,
                      double edge_tol) {
    const int n = static_cast<int>(p.size());
    for (int k = 0; k < n; ++k)
        if (point_segment_dist(x, p[k], p[(k + 1) % n]) <= edge_tol) return true;
    bool inside = false;
    for (int k = 0; k < n; ++k) {
        const auto& a = p[k];
        const auto& b = p[(k + 1) % n];
        if ((a.y() > x.y()) != (b.y() > x.y())) {
            const double t = (x.y() - a.y()) / (b.y() - a.y());
            if (a.x() + t * (b.x() - a.x()) > x.x()) inside = !inside;
        }
    }
    return inside;
}

}  // namespace

double BoundaryCurve::weight(int k) const {
    const int n = size();
    return 0.5 * (seg_len[(k + n - 1) % n] + seg_len[k]);
}

BoundaryCurve BoundaryCurve::from_polyline(std::vector<Eigen::Vector2d> pts) {
    if (pts.size() < 3) throw std::invalid_argument("BoundaryCurve: need >= 3 vertices");
    if (polygon_signed_area(pts) <= 0.0)
        throw std::invalid_argument("BoundaryCurve: polyline must be positively oriented");
    BoundaryCurve c;
    c.vertices = std::move(pts);
    const int n = c.size();
    c.seg_len.resize(n);
    c.seg_tau.resize(n);
    c.seg_n.resize(n);
    c.arc.resize(n);
    double s = 0.0;
    for (int k = 0; k < n; ++k) {
        c.arc[k] = s;
        const Eigen::Vector2d d = c.vertices[(k + 1) % n] - c.vertices[k];
        const double len = d.norm();
        if (len <= 0.0) throw std::invalid_argument("BoundaryCurve: repeated vertex");
        c.seg_len[k] = len;
        c.seg_tau[k] = d / len;
        c.seg_n[k] = Eigen::Vector2d(c.seg_tau[k].y(), -c.seg_tau[k].x());
        s += len;
    }
    c.length = s;
    c.vert_tau.resize(n);
    c.vert_n.resize(n);
    for (int k = 0; k < n; ++k) {
        Eigen::Vector2d t = c.seg_tau[(k + n - 1) % n] + c.seg_tau[k];
        if (t.norm() < 1e-14) t = c.seg_tau[k];
        t.normalize();
        c.vert_tau[k] = t;
        c.vert_n[k] = Eigen::Vector2d(t.y(), -t.x());
    }
    return c;
}

BoundaryCurve BoundaryCurve::rectangle(double x0, double y0, double w, double h,
                                       int nx, int ny) {
    std::vector<Eigen::Vector2d> pts;
    const double hx = w / nx, hy = h / ny;
    for (int i = 0; i < nx; ++i) pts.emplace_back(x0 + i * hx, y0);
    for (int j = 0; j < ny; ++j) pts.emplace_back(x0 + w, y0 + j * hy);
    for (int i = nx; i > 0; --i) pts.emplace_back(x0 + i * hx, y0 + h);
    for (int j = ny; j > 0; --j) pts.emplace_back(x0, y0 + j * hy);
    return from_polyline(std::move(pts));
}

BoundaryCurve BoundaryCurve::circle(const Eigen::Vector2d& center, double radius, int n) {
    std::vector<Eigen::Vector2d> pts;
    pts.reserve(n);
    for (int k = 0; k < n; ++k) {
        const double t = 2.0 * M_PI * k / n;
        pts.emplace_back(center.x() + radius * std::cos(t), center.y() + radius * std::sin(t));
    }
    BoundaryCurve c = from_polyline(std::move(pts));
    for (int k = 0; k < n; ++k) {
        const double t = 2.0 * M_PI * k / n;
        c.vert_n[k] = Eigen::Vector2d(std::cos(t), std::sin(t));
        c.vert_tau[k] = perp(c.vert_n[k]);
    }
    return c;
}

BoundaryCurve BoundaryCurve::from_grid(const Grid2D& g) {
    std::vector<Eigen::Vector2d> pts;
    std::vector<std::pair<int, int>> nodes;
    auto push = [&](int i, int j) {
        pts.emplace_back(g.x(i), g.y(j));
        nodes.emplace_back(i, j);
    };
    for (int i = 0; i < g.nx - 1; ++i) push(i, 0);
    for (int j = 0; j < g.ny - 1; ++j) push(g.nx - 1, j);
    for (int i = g.nx - 1; i > 0; --i) push(i, g.ny - 1);
    for (int j = g.ny - 1; j > 0; --j) push(0, j);
    BoundaryCurve c = from_polyline(std::move(pts));
    c.grid_nodes = std::move(nodes);
    return c;
}

BoundaryLoad BoundaryLoad::from_samples(std::vector<Eigen::Vector2d> g) {
    BoundaryLoad l;
    l.sampled = std::move(g);
    return l;
}

BoundaryLoad BoundaryLoad::from_points(std::vector<PointLoad> p) {
    BoundaryLoad l;
    l.points = std::move(p);
    return l;
}

bool balance_check(const BoundaryLoad& load, const BoundaryCurve& curve, double tol) {
    Eigen::Vector2d resultant = Eigen::Vector2d::Zero();
    double moment = 0.0;
    double scale = 0.0;
    if (load.is_points()) {
        for (const auto& p : load.points) {
            resultant += p.v;
            moment += perp(p.x).dot(p.v);
            scale += p.v.norm();
        }
    } else {
        if (static_cast<int>(load.sampled.size()) != curve.size())
            throw std::invalid_argument("balance_check: sampled size != vertex count");
        for (int k = 0; k < curve.size(); ++k) {
            const double w = curve.weight(k);
            resultant += w * load.sampled[k];
            moment += w * perp(curve.vertices[k]).dot(load.sampled[k]);
            scale += w * load.sampled[k].norm();
        }
    }
    if (scale == 0.0) return true;
    return resultant.norm() <= tol * scale && std::abs(moment) <= tol * scale;
}

Eigen::ArrayXd phi_integral(const Eigen::ArrayXd& values, const BoundaryCurve& curve,
                            double mean_tol) {
    const int n = curve.size();
    if (values.size() != n)
        throw std::invalid_argument("phi_integral: value count != vertex count");
    double mean = 0.0, scale = 0.0;
    for (int k = 0; k < n; ++k) {
        mean += curve.weight(k) * values[k];
        scale = std::max(scale, std::abs(values[k]));
    }
    mean /= curve.length;
    if (std::abs(mean) > mean_tol * (scale + 1e-300))
        throw std::invalid_argument("phi_integral: input has nonzero arc-length mean");

    Eigen::ArrayXd out(n);
    out[0] = 0.0;
    for (int k = 0; k + 1 < n; ++k)
        out[k + 1] = out[k] + curve.seg_len[k] * 0.5 * (values[k] + values[k + 1]);
    double out_mean = 0.0;
    for (int k = 0; k < n; ++k) out_mean += curve.weight(k) * out[k];
    out_mean /= curve.length;
    return out - out_mean;
}

void project_out_affine(BoundaryData& data, const BoundaryCurve& curve) {
    const int n = curve.size();
    // Trace pairs of the affine functions 1, x, y: (value, normal derivative).
    Eigen::Matrix<double, Eigen::Dynamic, 3> B1(n, 3), B2(n, 3);
    for (int k = 0; k < n; ++k) {
        B1(k, 0) = 1.0;
        B1(k, 1) = curve.vertices[k].x();
        B1(k, 2) = curve.vertices[k].y();
        B2(k, 0) = 0.0;
        B2(k, 1) = curve.vert_n[k].x();
        B2(k, 2) = curve.vert_n[k].y();
    }
    Eigen::VectorXd w(n);
    for (int k = 0; k < n; ++k) w[k] = curve.weight(k);
    Eigen::Matrix3d G = B1.transpose() * w.asDiagonal() * B1 +
                        B2.transpose() * w.asDiagonal() * B2;
    Eigen::Vector3d rhs = B1.transpose() * (w.array() * data.f1).matrix() +
                          B2.transpose() * (w.array() * data.f2).matrix();
    const Eigen::Vector3d c = G.ldlt().solve(rhs);
    data.f1 -= (B1 * c).array();
    data.f2 -= (B2 * c).array();
}

PointLoadIntegrals point_load_integrals(const std::vector<PointLoad>& loads,
                                        const BoundaryCurve& curve) {
    const int n = curve.size();
    const int m = static_cast<int>(loads.size());
    // Loads must sit on curve vertices; locate and sort by arc position.
    std::vector<int> vert(m);
    for (int i = 0; i < m; ++i) {
        int best = -1;
        double bd = std::numeric_limits<double>::max();
        for (int k = 0; k < n; ++k) {
            const double d = (curve.vertices[k] - loads[i].x).norm();
            if (d < bd) {
                bd = d;
                best = k;
            }
        }
        if (bd > 1e-9 * (1.0 + curve.length))
            throw std::invalid_argument(
                "point_load_integrals: load point is not a curve vertex; refine the polyline");
        vert[i] = best;
    }
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return vert[a] < vert[b]; });
    for (int i = 0; i + 1 < m; ++i)
        if (vert[order[i]] == vert[order[i + 1]])
            throw std::invalid_argument("point_load_integrals: coincident load points");

    PointLoadIntegrals out;
    out.load_vertex.resize(m);
    out.first_after.resize(m);
    out.second_at_load.resize(m);

    // Jumps of (g_perp)^(1) happen at the load vertices; segment k carries
    // the cumulative sum of all loads at vertices <= k.
    std::vector<Eigen::Vector2d> jump(n, Eigen::Vector2d::Zero());
    for (int i = 0; i < m; ++i) jump[vert[i]] += perp(loads[i].v);
    out.first_seg.resize(n);
    Eigen::Vector2d acc = Eigen::Vector2d::Zero();
    for (int k = 0; k < n; ++k) {
        acc += jump[k];
        out.first_seg[k] = acc;
    }
    if (acc.norm() > 1e-9 * (1.0 + acc.cwiseAbs().maxCoeff()))
        throw std::invalid_argument("point_load_integrals: unbalanced resultant");

    // The integrand of the second integral is constant per segment, so the
    // per-segment cumulative sums are exact.
    out.second.resize(n);
    out.second[0] = 0.0;
    for (int k = 0; k + 1 < n; ++k)
        out.second[k + 1] =
            out.second[k] + curve.seg_len[k] * curve.seg_tau[k].dot(out.first_seg[k]);
    const double closure =
        out.second[n - 1] + curve.seg_len[n - 1] * curve.seg_tau[n - 1].dot(out.first_seg[n - 1]);
    double scale = 0.0;
    for (const auto& p : loads) scale += p.v.norm();
    if (std::abs(closure) > 1e-9 * (1.0 + scale * curve.length))
        throw std::invalid_argument("point_load_integrals: unbalanced moment");

    for (int i = 0; i < m; ++i) {
        const int r = order[i];
        out.load_vertex[r] = vert[r];
        out.first_after[r] = out.first_seg[vert[r]];
        out.second_at_load[r] = out.second[vert[r]];
    }
    return out;
}

BoundaryData boundary_data_from_traction(const BoundaryLoad& load,
                                         const BoundaryCurve& curve, double balance_tol) {
    if (!balance_check(load, curve, balance_tol))
        throw std::invalid_argument("boundary_data_from_traction: load is not balanced");
    const int n = curve.size();
    BoundaryData out;
    out.f1.resize(n);
    out.f2.resize(n);
    if (load.is_points()) {
        const PointLoadIntegrals pli = point_load_integrals(load.points, curve);
        for (int k = 0; k < n; ++k) {
            out.f1[k] = -pli.second[k];
            // Value on the outgoing segment; (g_perp)^(1) jumps at load vertices.
            out.f2[k] = -pli.first_seg[k].dot(curve.vert_n[k]);
        }
    } else {
        Eigen::ArrayXd gp_x(n), gp_y(n);
        for (int k = 0; k < n; ++k) {
            gp_x[k] = -load.sampled[k].y();
            gp_y[k] = load.sampled[k].x();
        }
        const Eigen::ArrayXd p1x = phi_integral(gp_x, curve, 1e-6);
        const Eigen::ArrayXd p1y = phi_integral(gp_y, curve, 1e-6);
        Eigen::ArrayXd integrand(n);
        for (int k = 0; k < n; ++k)
            integrand[k] = curve.vert_tau[k].x() * p1x[k] + curve.vert_tau[k].y() * p1y[k];
        const Eigen::ArrayXd p2 = phi_integral(integrand, curve, 1e-4);
        for (int k = 0; k < n; ++k) {
            out.f1[k] = -p2[k];
            out.f2[k] = -(p1x[k] * curve.vert_n[k].x() + p1y[k] * curve.vert_n[k].y());
        }
    }
    project_out_affine(out, curve);
    return out;
}

Sym2Field stress_from_potential(const ScalarField& u) {
    if (!u.ghosts_populated())
        throw std::logic_error("stress_from_potential: ghost layers not populated");
    const Grid2D& g = u.grid();
    Sym2Field s;
    s.a.resize(g.ny, g.nx);
    s.b.resize(g.ny, g.nx);
    s.d.resize(g.ny, g.nx);
    // Every Hessian entry factors through centered first differences
    // (Dx Dx, Dx Dy, Dy Dy), so the centered row divergence of the cofactor
    // telescopes to zero identically.
    const double inv4h2 = 1.0 / (4.0 * g.h * g.h);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double uxx = (u(i - 2, j) - 2.0 * u(i, j) + u(i + 2, j)) * inv4h2;
            const double uyy = (u(i, j - 2) - 2.0 * u(i, j) + u(i, j + 2)) * inv4h2;
            const double uxy =
                (u(i + 1, j + 1) - u(i + 1, j - 1) - u(i - 1, j + 1) + u(i - 1, j - 1)) * inv4h2;
            const Sym2d sigma = cof(Sym2d{uxx, uxy, uyy});
            s.a(j, i) = sigma.a;
            s.b(j, i) = sigma.b;
            s.d(j, i) = sigma.d;
        }
    return s;
}

double stress_divergence_max(const Sym2Field& sigma, const Grid2D& g) {
    const double inv2h = 1.0 / (2.0 * g.h);
    double worst = 0.0;
    for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i) {
            const double r1 = (sigma.a(j, i + 1) - sigma.a(j, i - 1)) * inv2h +
                              (sigma.b(j + 1, i) - sigma.b(j - 1, i)) * inv2h;
            const double r2 = (sigma.b(j, i + 1) - sigma.b(j, i - 1)) * inv2h +
                              (sigma.d(j + 1, i) - sigma.d(j - 1, i)) * inv2h;
            worst = std::max(worst, std::max(std::abs(r1), std::abs(r2)));
        }
    return worst;
}

std::vector<Eigen::Vector2d> default_inner_polygon(const std::vector<PointLoad>& loads,
                                                   const BoundaryCurve& curve,
                                                   double eps_frac) {
    const int m = static_cast<int>(loads.size());
    std::vector<Eigen::Vector2d> poly(m);
    for (int i = 0; i < m; ++i) {
        double min_dist = std::numeric_limits<double>::max();
        for (int j = 0; j < m; ++j)
            if (j != i) min_dist = std::min(min_dist, (loads[j].x - loads[i].x).norm());
        const double vn = loads[i].v.norm();
        if (vn == 0.0) throw std::invalid_argument("default_inner_polygon: zero load vector");
        const double eps = eps_frac * min_dist / vn;
        const Eigen::Vector2d cand_p = loads[i].x + eps * loads[i].v;
        const Eigen::Vector2d cand_m = loads[i].x - eps * loads[i].v;
        const double tol = 1e-12 * (1.0 + curve.length);
        // Pick the endpoint strictly inside the domain.
        auto strictly_inside = [&](const Eigen::Vector2d& x) {
            for (int k = 0; k < curve.size(); ++k)
                if (point_segment_dist(x, curve.vertices[k],
                                       curve.vertices[(k + 1) % curve.size()]) <= tol)
                    return false;
            return point_in_polygon(x, curve.vertices, 0.0);
        };
        if (strictly_inside(cand_p))
            poly[i] = cand_p;
        else if (strictly_inside(cand_m))
            poly[i] = cand_m;
        else
            throw std::invalid_argument(
                "default_inner_polygon: load direction tangential to the boundary");
    }
    return poly;
}

PointLoadPotential point_load_potential(const std::vector<PointLoad>& loads,
                                        const BoundaryCurve& curve,
                                        const std::vector<Eigen::Vector2d>& inner_polygon) {
    const int m = static_cast<int>(loads.size());
    if (m < 2) throw std::invalid_argument("point_load_potential: need >= 2 loads");
    if (static_cast<int>(inner_polygon.size()) != m)
        throw std::invalid_argument("point_load_potential: one inner vertex per load required");

    const PointLoadIntegrals pli = point_load_integrals(loads, curve);

    // Inner vertices must lie on the load segments x_i + t v_i, strictly inside.
    const double tol = 1e-9 * (1.0 + curve.length);
    for (int i = 0; i < m; ++i) {
        const Eigen::Vector2d d = inner_polygon[i] - loads[i].x;
        if (d.norm() <= tol)
            throw std::invalid_argument("point_load_potential: inner vertex coincides with load");
        const double cross = d.x() * loads[i].v.y() - d.y() * loads[i].v.x();
        if (std::abs(cross) > 1e-9 * d.norm() * loads[i].v.norm())
            throw std::invalid_argument(
                "point_load_potential: inner vertex not on the load direction segment");
        bool on_boundary = false;
        for (int k = 0; k < curve.size(); ++k)
            if (point_segment_dist(inner_polygon[i], curve.vertices[k],
                                   curve.vertices[(k + 1) % curve.size()]) <= tol)
                on_boundary = true;
        if (on_boundary || !point_in_polygon(inner_polygon[i], curve.vertices, 0.0))
            throw std::invalid_argument(
                "point_load_potential: load direction tangential to the boundary "
                "(inner vertex not strictly inside)");
    }

    // Order loads counterclockwise by their curve vertex.
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return pli.load_vertex[a] < pli.load_vertex[b]; });

    PointLoadPotential pot;
    pot.sectors_.reserve(m);
    const int n = curve.size();
    for (int s = 0; s < m; ++s) {
        const int i = order[s];
        const int j = order[(s + 1) % m];
        PointLoadPotential::Piece piece;
        piece.grad = pli.first_after[i];
        piece.offset = pli.second_at_load[i] - piece.grad.dot(loads[i].x);
        // Boundary arc from load i to load j (inclusive), then inward.
        for (int k = pli.load_vertex[i];; k = (k + 1) % n) {
            piece.poly.push_back(curve.vertices[k]);
            if (k == pli.load_vertex[j]) break;
        }
        piece.poly.push_back(inner_polygon[j]);
        piece.poly.push_back(inner_polygon[i]);
        pot.sectors_.push_back(std::move(piece));
    }

    // Fill the inner polygon with a centroid fan (any continuous piecewise
    // affine extension works; the fan is canonical).
    if (m >= 3) {
        std::vector<Eigen::Vector2d> ordered_inner(m);
        for (int s = 0; s < m; ++s) ordered_inner[s] = inner_polygon[order[s]];
        Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
        for (const auto& p : ordered_inner) centroid += p;
        centroid /= m;
        // Vertex values from the adjacent sector pieces.
        std::vector<double> val(m);
        double cval = 0.0;
        for (int s = 0; s < m; ++s) {
            const auto& piece = pot.sectors_[s];
            val[s] = piece.offset + piece.grad.dot(ordered_inner[s]);
            cval += val[s];
        }
        cval /= m;
        pot.fan_.reserve(m);
        for (int s = 0; s < m; ++s) {
            const int t = (s + 1) % m;
            PointLoadPotential::Piece tri;
            tri.poly = {centroid, ordered_inner[s], ordered_inner[t]};
            // Affine interpolant of the three vertex values.
            Eigen::Matrix3d A;
            A << 1.0, centroid.x(), centroid.y(),
                 1.0, ordered_inner[s].x(), ordered_inner[s].y(),
                 1.0, ordered_inner[t].x(), ordered_inner[t].y();
            const Eigen::Vector3d rhs(cval, val[s], val[t]);
            const Eigen::Vector3d cfs = A.colPivHouseholderQr().solve(rhs);
            tri.offset = cfs[0];
            tri.grad = Eigen::Vector2d(cfs[1], cfs[2]);
            pot.fan_.push_back(std::move(tri));
        }
    }

    // Interior mesh edges for the limit-density mass and continuity tests.
    auto add_edge = [&pot](const Eigen::Vector2d& p, const Eigen::Vector2d& q,
                           const PointLoadPotential::Piece& l,
                           const PointLoadPotential::Piece& r) {
        pot.edges_.push_back({p, q, l.grad, r.grad, l.offset, r.offset});
    };
    for (int s = 0; s < m; ++s) {
        const int prev = (s + m - 1) % m;
        const int i = order[s];
        add_edge(loads[i].x, inner_polygon[i], pot.sectors_[prev], pot.sectors_[s]);
    }
    if (m == 2) {
        add_edge(inner_polygon[order[0]], inner_polygon[order[1]], pot.sectors_[0],
                 pot.sectors_[1]);
    } else {
        for (int s = 0; s < m; ++s) {
            const int t = (s + 1) % m;
            add_edge(inner_polygon[order[s]], inner_polygon[order[t]], pot.sectors_[s],
                     pot.fan_[s]);
            add_edge(pot.fan_[s].poly[0], inner_polygon[order[t]], pot.fan_[s], pot.fan_[t]);
        }
    }
    return pot;
}

double PointLoadPotential::eval(const Eigen::Vector2d& x) const {
    const Piece* best = nullptr;
    double best_dist = std::numeric_limits<double>::max();
    auto consider = [&](const Piece& p) {
        if (point_in_polygon(x, p.poly, 1e-12)) {
            best = &p;
            best_dist = -1.0;
            return true;
        }
        double d = std::numeric_limits<double>::max();
        const int n = static_cast<int>(p.poly.size());
        for (int k = 0; k < n; ++k)
            d = std::min(d, point_segment_dist(x, p.poly[k], p.poly[(k + 1) % n]));
        if (d < best_dist) {
            best_dist = d;
            best = &p;
        }
        return false;
    };
    for (const auto& p : sectors_)
        if (consider(p)) return p.offset + p.grad.dot(x);
    for (const auto& p : fan_)
        if (consider(p)) return p.offset + p.grad.dot(x);
    return best->offset + best->grad.dot(x);
}

ScalarField PointLoadPotential::to_field(const Grid2D& g) const {
    ScalarField u(g);
    u.fill([this](double x, double y) { return eval({x, y}); });
    return u;
}

double PointLoadPotential::limit_energy() const {
    double sum = 0.0;
    for (const auto& e : edges_) {
        const Eigen::Vector2d jump = e.grad_left - e.grad_right;
        sum += jump.norm() * (e.q - e.p).norm();
    }
    return 2.0 * sum;
}

ClampData sample_boundary_data(const BoundaryData& data, const BoundaryCurve& grid_curve,
                               const Grid2D& g) {
    if (grid_curve.grid_nodes.empty() ||
        grid_curve.size() != 2 * (g.nx + g.ny) - 4)
        throw std::invalid_argument("sample_boundary_data: curve was not built from this grid");
    if (data.f1.size() != grid_curve.size())
        throw std::invalid_argument("sample_boundary_data: data size != curve size");
    ClampData cd = ClampData::zero(g);
    for (int k = 0; k < grid_curve.size(); ++k) {
        const auto [i, j] = grid_curve.grid_nodes[k];
        const double f1 = data.f1[k], f2 = data.f2[k];
        if (j == 0) {
            cd.f1_bottom[i] = f1;
            cd.f2_bottom[i] = f2;
        }
        if (j == g.ny - 1) {
            cd.f1_top[i] = f1;
            cd.f2_top[i] = f2;
        }
        if (i == 0) {
            cd.f1_left[j] = f1;
            cd.f2_left[j] = f2;
        }
        if (i == g.nx - 1) {
            cd.f1_right[j] = f1;
            cd.f2_right[j] = f2;
        }
    }
    return cd;
}

}  // namespace michell

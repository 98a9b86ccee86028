#include "michell/constructions.hpp"

#include <cmath>
#include <stdexcept>

#include "michell/density.hpp"
#include "michell/envelope.hpp"

namespace michell {

double q_offset(double t) {
    if (t <= 0.0 || t >= 1.0)
        throw std::invalid_argument("q_offset: t must lie strictly between 0 and 1");
    return 0.5 * (1.0 - t);
}

LaminateWave::LaminateWave(double t_, double q_, double c_) : t(t_), q(q_), c(c_) {
    if (t < 0.0 || t > 1.0) throw std::invalid_argument("LaminateWave: t outside [0,1]");
    if (q < 0.0 || q > 1.0 - t) throw std::invalid_argument("LaminateWave: q outside [0,1-t]");
}

double LaminateWave::phi(double y) const {
    const double p = y - std::floor(y);
    return (p >= q && p < q + t) ? (1.0 - t) * c : -t * c;
}

double LaminateWave::psi(double y) const {
    const double p = y - std::floor(y);
    if (p <= q) return -t * c * p;
    if (p <= q + t) return -t * c * q + (1.0 - t) * c * (p - q);
    return c * t * (1.0 - t - q) - t * c * (p - q - t);
}

double LaminateWave::period_psi_integral() const {
    // Integral of psi over one period; vanishes exactly at q = (1-t)/2.
    return c * t * (0.5 * (1.0 - t) - q);
}

double LaminateWave::psi2(double y) const {
    const double m = std::floor(y);
    const double p = y - m;
    const double A1 = -0.5 * t * c * q * q;
    const double A2 = A1 - t * c * q * t + 0.5 * (1.0 - t) * c * t * t;
    double val;
    if (p <= q) {
        val = -0.5 * t * c * p * p;
    } else if (p <= q + t) {
        const double s = p - q;
        val = A1 - t * c * q * s + 0.5 * (1.0 - t) * c * s * s;
    } else {
        const double s = p - q - t;
        val = A2 + c * t * (1.0 - t - q) * s - 0.5 * t * c * s * s;
    }
    return m * period_psi_integral() + val;
}

SampledProfile laminate_1d(const LaminateSpec& spec, int n) {
    if (spec.t < 0.0 || spec.t > 1.0)
        throw std::invalid_argument("laminate_1d: t outside [0,1]");
    if (spec.k < 1) throw std::invalid_argument("laminate_1d: k must be >= 1");
    if (n < 64 * spec.k) throw std::invalid_argument("laminate_1d: need n >= 64 k samples");

    SampledProfile prof;
    prof.n = n;
    prof.x.resize(n);
    prof.u.resize(n);
    prof.du.resize(n);
    prof.ddu.resize(n);

    const double mean = spec.t * spec.alpha + (1.0 - spec.t) * spec.beta;
    const bool flat = spec.t <= 0.0 || spec.t >= 1.0 || spec.alpha == spec.beta;
    const double kk = spec.k;
    const double q = spec.q >= 0.0 ? spec.q : (flat ? 0.0 : q_offset(spec.t));

    for (int i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) / (n - 1);
        prof.x[i] = x;
        const double ut = 0.5 * mean * x * x;
        if (flat) {
            prof.u[i] = ut;
            prof.du[i] = mean * x;
            prof.ddu[i] = spec.t >= 1.0 ? spec.alpha : (spec.t <= 0.0 ? spec.beta : mean);
            continue;
        }
        const LaminateWave w(spec.t, q, spec.alpha - spec.beta);
        prof.u[i] = ut + w.psi2(kk * x) / (kk * kk);
        prof.du[i] = mean * x + w.psi(kk * x) / kk;
        prof.ddu[i] = mean + w.phi(kk * x);
    }
    return prof;
}

namespace {

// Quintic smoothstep, C^2 at both ends.
double smoothstep(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

// 1 in the interior of [0,1], ramping to 0 over a margin e at each end.
double ramp01(double s, double e) {
    if (s < e) return smoothstep(s / e);
    if (s > 1.0 - e) return smoothstep((1.0 - s) / e);
    return 1.0;
}

}  // namespace

ScalarField build_laminate_2d(const Sym2d& xi1, const Sym2d& xi2, double t, int k,
                              double eps_margin, int grid_n) {
    if (t < 0.0 || t > 1.0) throw std::invalid_argument("build_laminate_2d: t outside [0,1]");
    if (eps_margin <= 0.0 || eps_margin >= 0.25)
        throw std::invalid_argument("build_laminate_2d: eps_margin outside (0, 1/4)");
    if (k < 1) throw std::invalid_argument("build_laminate_2d: k must be >= 1");

    // xi1 - xi2 must be a rank-one outer square alpha eta (x) eta.
    const Sym2d diff = xi1 - xi2;
    const double dn = norm(diff);
    double alpha = 0.0;
    double eta_x = 1.0, eta_y = 0.0;
    if (dn > 0.0) {
        if (std::abs(det(diff)) > 1e-10 * dn * dn)
            throw std::invalid_argument(
                "build_laminate_2d: xi1 - xi2 is not symmetric rank one");
        const auto [l1, l2] = eigenvalues(diff);
        alpha = std::abs(l1) >= std::abs(l2) ? l1 : l2;
        // Eigenvector of the dominant eigenvalue.
        if (std::abs(diff.b) > 1e-14 * dn) {
            const double vx = diff.b, vy = alpha - diff.a;
            const double vn = std::hypot(vx, vy);
            eta_x = vx / vn;
            eta_y = vy / vn;
        } else if (std::abs(diff.a - alpha) > std::abs(diff.d - alpha)) {
            eta_x = 0.0;
            eta_y = 1.0;
        }
        const Sym2d resid{diff.a - alpha * eta_x * eta_x, diff.b - alpha * eta_x * eta_y,
                          diff.d - alpha * eta_y * eta_y};
        if (norm(resid) > 1e-8 * dn)
            throw std::invalid_argument("build_laminate_2d: rank-one factor check failed");
    }

    const Sym2d xi_eff = t * xi1 + (1.0 - t) * xi2;
    const Grid2D g = unit_square_grid(grid_n);
    ScalarField u(g);
    if (dn == 0.0 || t == 0.0 || t == 1.0) {
        u.fill([&](double x, double y) {
            return 0.5 * (xi_eff.a * x * x + 2.0 * xi_eff.b * x * y + xi_eff.d * y * y);
        });
        return u;
    }

    // Oscillation along s = x . eta, rescaled to [0,1] over the square.
    double smin = 0.0, smax = 0.0;
    bool first = true;
    for (double cx : {0.0, 1.0})
        for (double cy : {0.0, 1.0}) {
            const double s = cx * eta_x + cy * eta_y;
            if (first || s < smin) smin = s;
            if (first || s > smax) smax = s;
            first = false;
        }
    const double L = smax - smin;
    const LaminateWave w(t, q_offset(t), alpha);
    const double kk = k;
    const double e = eps_margin;

    u.fill([&](double x, double y) {
        const double quad = 0.5 * (xi_eff.a * x * x + 2.0 * xi_eff.b * x * y + xi_eff.d * y * y);
        const double sigma = (x * eta_x + y * eta_y - smin) / L;
        const double osc = (L * L) / (kk * kk) * w.psi2(kk * sigma);
        const double chi = ramp01(x, e) * ramp01(y, e);
        return quad + chi * osc;
    });
    return u;
}

ScalarField build_two_level_laminate(double x, double y, double lambda, int k,
                                     double eps_margin, int grid_n) {
    const RsglSplit split = rsgl_split(Sym2d::Diagonal(x, y), lambda);
    if (split.splits.size() != 2)
        throw std::invalid_argument(
            "build_two_level_laminate: need both x and y nonzero for two levels");
    if (eps_margin <= 0.0 || eps_margin >= 0.25)
        throw std::invalid_argument("build_two_level_laminate: eps_margin outside (0, 1/4)");

    const double beta = split.splits[0].t;        // outer volume fraction
    const double alpha_out = split.splits[0].alpha;  // = y / beta
    const double a_in = split.splits[1].t;        // inner volume fraction
    const double alpha_in = split.splits[1].alpha;   // = x / a_in

    // Outer one-band split along e2: the refined phase diag(x, 0) occupies
    // the interior band I = [q_out, q_out + (1-beta)], the diag(x, y/beta)
    // phase touches the top and bottom edges. Wave amplitude -alpha_out
    // puts -beta alpha_out (the diag(x,0) offset) on the band.
    const double t_out = 1.0 - beta;
    const LaminateWave w_out(t_out, q_offset(t_out), -alpha_out);
    // Inner k-period split along e1 on the band.
    const LaminateWave w_in(a_in, q_offset(a_in), alpha_in);
    const double kk = k;

    const double band_lo = w_out.q;
    const double band_hi = w_out.q + t_out;
    const double margin = eps_margin * t_out;

    const Grid2D g = unit_square_grid(grid_n);
    ScalarField u(g);
    u.fill([&](double px, double py) {
        const double quad = 0.5 * (x * px * px + y * py * py);
        const double v_out = w_out.psi2(py);
        // Inner-oscillation envelope: 1 on the band core, 0 outside.
        double env = 0.0;
        if (py > band_lo && py < band_hi) {
            const double s = (py - band_lo) / t_out;
            env = ramp01(s, margin / t_out);
        }
        const double v_in = env * w_in.psi2(kk * px) / (kk * kk);
        return quad + v_out + v_in;
    });
    return u;
}

RecoveryResult recovery_sequence(const ScalarField& u_limit, const ScalarField& f_field,
                                 double lambda, double c2) {
    const Grid2D& g = u_limit.grid();
    const Grid2D& gf = f_field.grid();
    if (g.nx != gf.nx || g.ny != gf.ny || g.h != gf.h || g.ox != gf.ox || g.oy != gf.oy)
        throw std::invalid_argument("recovery_sequence: fields must share a grid");
    if (lambda <= 0.0) throw std::invalid_argument("recovery_sequence: lambda must be > 0");
    if (!u_limit.ghosts_populated() || !f_field.ghosts_populated())
        throw std::logic_error("recovery_sequence: ghosts must be populated");

    ScalarField v(g);
    v.raw() = u_limit.raw() - f_field.raw();
    v.set_ghosts_populated(true);

    // Boundary compatibility: the value traces must agree so v extends by
    // zero; the normal-derivative mismatch becomes an interior ridge after
    // the shrink and is energetically accounted for.
    double vscale = v.raw().abs().maxCoeff();
    double btrace = 0.0;
    for (int i = 0; i < g.nx; ++i)
        btrace = std::max({btrace, std::abs(v(i, 0)), std::abs(v(i, g.ny - 1))});
    for (int j = 0; j < g.ny; ++j)
        btrace = std::max({btrace, std::abs(v(0, j)), std::abs(v(g.nx - 1, j))});
    if (btrace > 1e-9 * (vscale + 1e-300))
        throw std::invalid_argument("recovery_sequence: value traces of the fields differ");

    RecoveryResult out;

    // Discrete |D^2 v| (Frobenius mass).
    double mass = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            mass += quad_weight(g, i, j) * norm(discrete_hessian(v, i, j));
    out.v_mass = mass;

    const double eps = 4.0 * c2 * mass / std::sqrt(lambda);
    out.eps = eps;

    // Shrink toward the rectangle center: sample v at the inflated preimage.
    const double diam = std::hypot(g.width(), g.height());
    const double c1 = 8.0 * (1.0 + diam);
    const double s = std::sqrt(1.0 + c1 * eps);
    const double cx = g.ox + 0.5 * g.width();
    const double cy = g.oy + 0.5 * g.height();

    auto sample = [&](double px, double py) -> double {
        // Catmull-Rom bicubic on the node lattice, zero outside the domain.
        const double gi = (px - g.ox) / g.h;
        const double gj = (py - g.oy) / g.h;
        if (gi < 0.0 || gi > g.nx - 1 || gj < 0.0 || gj > g.ny - 1) return 0.0;
        const int i0 = std::min(static_cast<int>(std::floor(gi)), g.nx - 2);
        const int j0 = std::min(static_cast<int>(std::floor(gj)), g.ny - 2);
        const double fx = gi - i0, fy = gj - j0;
        auto cr = [](double pm1, double p0, double p1, double p2, double f) {
            return p0 + 0.5 * f * (p1 - pm1 +
                    f * (2.0 * pm1 - 5.0 * p0 + 4.0 * p1 - p2 +
                         f * (3.0 * (p0 - p1) + p2 - pm1)));
        };
        double rows[4];
        for (int r = 0; r < 4; ++r) {
            const int j = j0 - 1 + r;
            rows[r] = cr(v(i0 - 1, j), v(i0, j), v(i0 + 1, j), v(i0 + 2, j), fx);
        }
        return cr(rows[0], rows[1], rows[2], rows[3], fy);
    };

    ScalarField shrunk(g);
    shrunk.fill([&](double px, double py) {
        return sample(cx + (px - cx) * s, cy + (py - cy) * s);
    });

    // Mollification with the normalized C^2 bump (1 - r^2/eps^2)^3.
    ScalarField mollified(g);
    const int rad = static_cast<int>(std::floor(eps / g.h));
    if (rad < 1) {
        mollified = shrunk;
    } else {
        std::vector<double> kernel((2 * rad + 1) * (2 * rad + 1));
        double ksum = 0.0;
        for (int dj = -rad; dj <= rad; ++dj)
            for (int di = -rad; di <= rad; ++di) {
                const double r2 = (di * di + dj * dj) * g.h * g.h / (eps * eps);
                const double kv = r2 < 1.0 ? std::pow(1.0 - r2, 3) : 0.0;
                kernel[(dj + rad) * (2 * rad + 1) + (di + rad)] = kv;
                ksum += kv;
            }
        for (double& kv : kernel) kv /= ksum;
        auto shr = [&](int i, int j) -> double {
            if (i < -2 || i > g.nx + 1 || j < -2 || j > g.ny + 1) return 0.0;
            return shrunk(i, j);
        };
        for (int j = -2; j <= g.ny + 1; ++j)
            for (int i = -2; i <= g.nx + 1; ++i) {
                double acc = 0.0;
                for (int dj = -rad; dj <= rad; ++dj)
                    for (int di = -rad; di <= rad; ++di)
                        acc += kernel[(dj + rad) * (2 * rad + 1) + (di + rad)] *
                               shr(i + di, j + dj);
                mollified(i, j) = acc;
            }
        mollified.set_ghosts_populated(true);
    }

    double hmax = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            hmax = std::max(hmax, norm(discrete_hessian(mollified, i, j)));
    out.hess_max = hmax;

    out.field = ScalarField(g);
    out.field.raw() = f_field.raw() + mollified.raw();
    out.field.set_ghosts_populated(true);
    return out;
}

}  // namespace michell

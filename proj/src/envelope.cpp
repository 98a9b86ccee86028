#include "michell/envelope.hpp"

#include <cmath>
#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace michell {

Sym2d split_child1(const Sym2d& xi, const SplitCandidate& c) {
    return xi + Sym2d::OuterSquare(c.eta_angle, (1.0 - c.t) * c.alpha);
}

Sym2d split_child2(const Sym2d& xi, const SplitCandidate& c) {
    return xi - Sym2d::OuterSquare(c.eta_angle, c.t * c.alpha);
}

LaminationGrid LaminationGrid::for_lambda(double lambda) {
    LaminationGrid g;
    g.alpha_max = 4.0 * std::sqrt(lambda);
    return g;
}

void LaminationGrid::validate() const {
    if (n_t < 2 || n_alpha < 2 || n_theta < 2)
        throw std::invalid_argument("LaminationGrid: sample counts must be >= 2");
    if (alpha_max <= 0.0) throw std::invalid_argument("LaminationGrid: alpha_max must be > 0");
}

namespace {

double split_value(const DensityFn& f, const Sym2d& xi, double t, double alpha,
                   double cos_th, double sin_th) {
    const double hxx = cos_th * cos_th, hxy = cos_th * sin_th, hyy = sin_th * sin_th;
    const double a1 = (1.0 - t) * alpha, a2 = -t * alpha;
    const Sym2d xi1{xi.a + a1 * hxx, xi.b + a1 * hxy, xi.d + a1 * hyy};
    const Sym2d xi2{xi.a + a2 * hxx, xi.b + a2 * hxy, xi.d + a2 * hyy};
    return t * f(xi1) + (1.0 - t) * f(xi2);
}

// Golden-section refinement of g over [lo, hi].
template <typename G>
double golden_min(const G& g, double lo, double hi, double* arg) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = g(x1), f2 = g(x2);
    for (int it = 0; it < 40; ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = g(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = g(x2);
        }
    }
    if (f1 <= f2) {
        *arg = x1;
        return f1;
    }
    *arg = x2;
    return f2;
}

struct CacheKey {
    int level;
    int64_t qa, qb, qd;
    bool operator==(const CacheKey& o) const {
        return level == o.level && qa == o.qa && qb == o.qb && qd == o.qd;
    }
};

struct CacheKeyHash {
    size_t operator()(const CacheKey& k) const {
        size_t h = std::hash<int>()(k.level);
        auto mix = [&h](int64_t v) {
            h ^= std::hash<int64_t>()(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        };
        mix(k.qa);
        mix(k.qb);
        mix(k.qd);
        return h;
    }
};

class RsymSearch {
public:
    RsymSearch(const DensityFn& f, const LaminationGrid& grid)
        : f_(f), grid_(grid), quantum_(2.5e-7 * grid.alpha_max) {}

    double eval(const Sym2d& xi, int level) {
        if (level == 0) return f_(xi);
        const CacheKey key{level, quant(xi.a), quant(xi.b), quant(xi.d)};
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = cache_.find(key);
            if (it != cache_.end()) return it->second;
        }
        const DensityFn child = [this, level](const Sym2d& m) { return eval(m, level - 1); };
        const double v = rsym_step(child, xi, grid_);
        std::lock_guard<std::mutex> lock(mutex_);
        cache_.emplace(key, v);
        return v;
    }

private:
    int64_t quant(double x) const { return static_cast<int64_t>(std::llround(x / quantum_)); }

    const DensityFn& f_;
    const LaminationGrid& grid_;
    double quantum_;
    std::unordered_map<CacheKey, double, CacheKeyHash> cache_;
    std::mutex mutex_;
};

}  // namespace

double rsym_step(const DensityFn& f, const Sym2d& xi, const LaminationGrid& grid) {
    grid.validate();
    double best = f(xi);  // alpha = 0 candidate
    double best_t = 0.5, best_alpha = 0.0, best_cos = 1.0, best_sin = 0.0;

    const double dt = 1.0 / (grid.n_t - 1);
    const double da = 2.0 * grid.alpha_max / (grid.n_alpha - 1);
    for (int jt = 0; jt < grid.n_theta; ++jt) {
        const double theta = M_PI * jt / grid.n_theta;
        const double c = std::cos(theta), s = std::sin(theta);
        for (int it = 0; it < grid.n_t; ++it) {
            const double t = it * dt;
            for (int ia = 0; ia < grid.n_alpha; ++ia) {
                const double alpha = -grid.alpha_max + ia * da;
                const double v = split_value(f, xi, t, alpha, c, s);
                if (v < best) {
                    best = v;
                    best_t = t;
                    best_alpha = alpha;
                    best_cos = c;
                    best_sin = s;
                }
            }
        }
    }

    // Local refinement around the best grid cell, alternating alpha and t.
    double t = best_t, alpha = best_alpha;
    for (int round = 0; round < grid.refine_rounds; ++round) {
        double a_arg = alpha;
        const double va = golden_min(
            [&](double a) { return split_value(f, xi, t, a, best_cos, best_sin); },
            alpha - da, alpha + da, &a_arg);
        if (va < best) {
            best = va;
            alpha = a_arg;
        }
        double t_arg = t;
        const double vt = golden_min(
            [&](double tt) { return split_value(f, xi, tt, alpha, best_cos, best_sin); },
            std::max(0.0, t - dt), std::min(1.0, t + dt), &t_arg);
        if (vt < best) {
            best = vt;
            t = t_arg;
        }
    }
    return best;
}

double rsym_iterate(const DensityFn& f, const Sym2d& xi, int k, const LaminationGrid& grid) {
    if (k < 1) throw std::invalid_argument("rsym_iterate: k must be >= 1");
    grid.validate();
    RsymSearch search(f, grid);
    return search.eval(xi, k);
}

RsglSplit rsgl_split(const Sym2d& xi, double lambda) {
    if (lambda <= 0.0) throw std::invalid_argument("rsgl_split: lambda must be > 0");
    const double scale = std::max(1.0, norm(xi));
    if (std::abs(xi.b) > 1e-12 * scale)
        throw std::invalid_argument("rsgl_split: input must be diagonal");
    const double x = xi.a, y = xi.d;
    const double sqrt_lam = std::sqrt(lambda);
    const double r0 = std::abs(x) + std::abs(y);
    if (r0 <= 0.0) throw std::invalid_argument("rsgl_split: input must be nonzero");
    if (r0 >= sqrt_lam)
        throw std::invalid_argument("rsgl_split: rho0 must be < sqrt(lambda)");

    RsglSplit out;
    out.value = 2.0 * sqrt_lam * r0 - 2.0 * std::abs(x * y);

    const double inner_value = 2.0 * std::abs(x) * sqrt_lam;
    if (std::abs(y) > 0.0) {
        // Outer split along e2: diag(x, y/beta) against diag(x, 0).
        SplitCandidate outer;
        outer.t = std::abs(y) / (sqrt_lam - std::abs(x));
        outer.alpha = y / outer.t;
        outer.eta_angle = M_PI / 2.0;
        const double f_xi3 = lambda + x * x + (y / outer.t) * (y / outer.t);
        outer.value = outer.t * f_xi3 + (1.0 - outer.t) * inner_value;
        out.splits.push_back(outer);
    }
    if (std::abs(x) > 0.0) {
        // Inner split of diag(x, 0) along e1: diag(x/t, 0) against 0.
        SplitCandidate inner;
        inner.t = std::abs(x) / sqrt_lam;
        inner.alpha = x / inner.t;
        inner.eta_angle = 0.0;
        inner.value = inner_value;
        out.splits.push_back(inner);
    }
    return out;
}

}  // namespace michell

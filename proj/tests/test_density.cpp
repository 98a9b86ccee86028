#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "michell/density.hpp"
#include "test_helpers.hpp"

using namespace michell;
using michell::testing::random_sym;

TEST_CASE("f_lambda two-phase values") {
    CHECK(f_lambda(Sym2d::Zero(), EnergyParams(1.0)) == 0.0);
    CHECK(f_lambda(Sym2d::Identity(), EnergyParams(1.0)) == doctest::Approx(3.0));
    CHECK(f_lambda(Sym2d(0.0, 1.0, 0.0), EnergyParams(4.0)) == doctest::Approx(6.0));
    // The zero test is bitwise: any nonzero entry pays lambda.
    CHECK(f_lambda(Sym2d(1e-300, 0.0, 0.0), EnergyParams(1.0)) >= 1.0);
}

TEST_CASE("qc_envelope branch values") {
    CHECK(qc_envelope(Sym2d::Diagonal(1.0, 0.0), EnergyParams(4.0)) == doctest::Approx(4.0));
    CHECK(qc_envelope(Sym2d::Identity(), EnergyParams(1.0)) == doctest::Approx(3.0));
    CHECK(qc_envelope(Sym2d::Zero(), EnergyParams(13.0)) == 0.0);
}

TEST_CASE("g_lambda values") {
    CHECK(g_lambda(Sym2d::Diagonal(1.0, 0.0), EnergyParams(4.0)) == doctest::Approx(2.0));
    CHECK(g_lambda(Sym2d::Diagonal(1.0, -1.0), EnergyParams(100.0)) == doctest::Approx(3.8));
    CHECK(g_lambda(Sym2d::Zero(), EnergyParams(5.0)) == 0.0);
}

TEST_CASE("limit density") {
    CHECK(limit_density(Sym2d::Diagonal(1.0, 0.0)) == doctest::Approx(2.0));
    CHECK(limit_density(Sym2d::Diagonal(1.0, -1.0)) == doctest::Approx(4.0));
    CHECK(limit_density(Sym2d::Zero()) == 0.0);
}

TEST_CASE("smoothed density values and consistency") {
    // Direct evaluation of the surrogate at the origin: both eigenvalues 0.
    CHECK(g_lambda_smooth(Sym2d::Zero(), EnergyParams(1.0, 0.1)) ==
          doctest::Approx(0.38).epsilon(1e-12));

    const Sym2d xi = Sym2d::Diagonal(1.0, 0.0);
    for (double eps : {1e-3, 1e-5, 1e-7}) {
        const double v = g_lambda_smooth(xi, EnergyParams(4.0, eps));
        CHECK(std::abs(v - 2.0) <= 5.0 * eps);
    }

    // High branch needs no smoothing.
    const Sym2d big = Sym2d::Diagonal(10.0, 10.0);
    const EnergyParams p(4.0, 1e-2);
    CHECK(g_lambda_smooth(big, p) ==
          doctest::Approx((squared_norm(big) + 4.0) / 2.0).epsilon(1e-15));

    CHECK_THROWS(g_lambda_smooth(xi, EnergyParams(4.0, 0.0)));
    CHECK_THROWS(limit_density_smooth(xi, 0.0));
}

TEST_CASE("smoothed densities sit at most 4 eps below the exact ones") {
    auto gen = testing::rng(5);
    for (double lambda : {1.0, 10.0}) {
        for (double eps : {1e-1, 1e-2}) {
            const EnergyParams p(lambda, eps);
            for (int it = 0; it < 20000; ++it) {
                const Sym2d xi = random_sym(gen, 2.0 * std::sqrt(lambda));
                CHECK(g_lambda_smooth(xi, p) >= g_lambda(xi, p) - 4.0 * eps);
            }
        }
    }
}

TEST_CASE("limit density smoothing") {
    CHECK(limit_density_smooth(Sym2d::Zero(), 0.1) == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(std::abs(limit_density_smooth(Sym2d::Diagonal(3.0, -4.0), 1e-6) - 14.0) <= 1e-5);

    const Sym2d g = limit_density_smooth_grad(Sym2d::Diagonal(3.0, -4.0), 1e-3);
    CHECK(g.a == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(g.b == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(g.d == doctest::Approx(-2.0).epsilon(1e-6));
}

namespace {

// Finite-difference oracle for a density gradient in the (a, b, d) slots.
template <typename F>
Sym2d fd_gradient(const F& f, const Sym2d& xi, double h = 1e-6) {
    auto at = [&](double da, double db, double dd) {
        return f(Sym2d(xi.a + da, xi.b + db, xi.d + dd));
    };
    return {(at(h, 0, 0) - at(-h, 0, 0)) / (2 * h), (at(0, h, 0) - at(0, -h, 0)) / (2 * h),
            (at(0, 0, h) - at(0, 0, -h)) / (2 * h)};
}

}  // namespace

TEST_CASE("gradient of g_lambda_smooth matches finite differences") {
    auto gen = testing::rng(31);
    const EnergyParams p(10.0, 1e-2);
    const double sq = std::sqrt(10.0);
    int checked = 0;
    while (checked < 200) {
        const Sym2d xi = random_sym(gen, 1.5 * sq);
        // Stay away from the branch interface where the surrogate kinks.
        if (std::abs(rho0_smooth(xi, p.smooth_eps) - sq) < 0.1 * sq) continue;
        const Sym2d g = g_lambda_smooth_grad(xi, p);
        const Sym2d fd =
            fd_gradient([&](const Sym2d& m) { return g_lambda_smooth(m, p); }, xi);
        const double scale = 1.0 + norm(fd);
        CHECK(std::abs(g.a - fd.a) <= 1e-5 * scale);
        CHECK(std::abs(g.b - fd.b) <= 1e-5 * scale);
        CHECK(std::abs(g.d - fd.d) <= 1e-5 * scale);
        ++checked;
    }
}

TEST_CASE("gradient at zero vanishes") {
    const Sym2d g = g_lambda_smooth_grad(Sym2d::Zero(), EnergyParams(10.0, 1e-2));
    CHECK(g.a == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(g.b == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(g.d == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("large lambda gradient is dominated by the rho0 term") {
    const EnergyParams p(1e6, 1e-3);
    const Sym2d xi = Sym2d::Diagonal(2.0, 1.0);
    const Sym2d g = g_lambda_smooth_grad(xi, p);
    const Sym2d fd = fd_gradient([&](const Sym2d& m) { return g_lambda_smooth(m, p); }, xi);
    CHECK(std::abs(g.a - fd.a) <= 1e-5 * (1.0 + std::abs(fd.a)));
    CHECK(std::abs(g.d - fd.d) <= 1e-5 * (1.0 + std::abs(fd.d)));
    // Against 2 * grad rho0_smooth: the det term carries weight 1/sqrt(lambda).
    const Sym2d lg = limit_density_smooth_grad(xi, p.smooth_eps);
    CHECK(std::abs(g.a - lg.a) <= 1e-2);
    CHECK(std::abs(g.d - lg.d) <= 1e-2);
}

TEST_CASE("limit density smooth gradient matches finite differences") {
    auto gen = testing::rng(37);
    for (int it = 0; it < 200; ++it) {
        const Sym2d xi = random_sym(gen, 4.0);
        const double eps = 1e-2;
        const Sym2d g = limit_density_smooth_grad(xi, eps);
        const Sym2d fd =
            fd_gradient([&](const Sym2d& m) { return limit_density_smooth(m, eps); }, xi);
        const double scale = 1.0 + norm(fd);
        CHECK(std::abs(g.a - fd.a) <= 1e-5 * scale);
        CHECK(std::abs(g.b - fd.b) <= 1e-5 * scale);
        CHECK(std::abs(g.d - fd.d) <= 1e-5 * scale);
    }
}

TEST_CASE("density inequality suite on random samples") {
    auto gen = testing::rng(41);
    for (double lambda : {1.0, 10.0, 100.0}) {
        const EnergyParams p(lambda);
        const double sq = std::sqrt(lambda);
        for (int it = 0; it < 100000; ++it) {
            const Sym2d xi = random_sym(gen, 2.0 * sq);
            const double gl = g_lambda(xi, p);
            const double r0 = rho0(xi);
            // Compactness bound.
            CHECK(0.5 * r0 <= gl * (1.0 + 1e-12) + 1e-12);
            // Envelope property.
            CHECK(qc_envelope(xi, p) <= f_lambda(xi, p) * (1.0 + 1e-12) + 1e-12);
            // Low-branch upper bound.
            if (r0 <= sq) CHECK(gl <= 2.0 * r0 * (1.0 + 1e-12) + 1e-12);
        }
    }
}

TEST_CASE("pointwise limit identity once lambda >= rho0^2") {
    auto gen = testing::rng(43);
    for (int it = 0; it < 10000; ++it) {
        const Sym2d xi = random_sym(gen, 3.0);
        const double lambda = std::max(1.0, rho0(xi) * rho0(xi)) * (1.0 + 0.5 * it / 10000.0);
        const EnergyParams p(lambda);
        const double diff = g_lambda(xi, p) - limit_density(xi);
        const double expect = -2.0 / std::sqrt(lambda) * std::abs(det(xi));
        CHECK(diff == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("branch continuity along rays") {
    auto gen = testing::rng(47);
    for (double lambda : {1.0, 10.0, 100.0}) {
        const EnergyParams p(lambda);
        const double sq = std::sqrt(lambda);
        for (int it = 0; it < 1000; ++it) {
            Sym2d dir = random_sym(gen, 1.0);
            const double r = rho0(dir);
            if (r < 1e-6) continue;
            // Scale the ray to hit the interface rho0 = sqrt(lambda).
            const double s = sq / r;
            const Sym2d xi = s * dir;
            const double low = 2.0 * sq * rho0(xi) - 2.0 * std::abs(det(xi));
            const double high = squared_norm(xi) + lambda;
            CHECK(low == doctest::Approx(high).epsilon(1e-9));
            CHECK(qc_envelope(xi, p) == doctest::Approx(low).epsilon(1e-12));
        }
    }
}

TEST_CASE("scaling law qc(xi, lambda) = lambda qc(xi / sqrt(lambda), 1)") {
    auto gen = testing::rng(53);
    const EnergyParams p1(1.0);
    for (double lambda : {1.0, 10.0, 100.0}) {
        const EnergyParams p(lambda);
        const double sq = std::sqrt(lambda);
        for (int it = 0; it < 30000; ++it) {
            const Sym2d xi = random_sym(gen, 2.0 * sq);
            const double lhs = qc_envelope(xi, p);
            const double rhs = lambda * qc_envelope(xi * (1.0 / sq), p1);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        }
    }
}

TEST_CASE("quasi-triangle inequality with empirical constant 16") {
    auto gen = testing::rng(59);
    for (double lambda : {1.0, 10.0, 100.0}) {
        const EnergyParams p(lambda);
        const double sq = std::sqrt(lambda);
        for (int it = 0; it < 100000; ++it) {
            const double scale = (it % 3 == 0) ? 0.3 * sq : (it % 3 == 1 ? sq : 3.0 * sq);
            const Sym2d A = random_sym(gen, scale);
            const Sym2d B = random_sym(gen, scale);
            CHECK(g_lambda(A + B, p) <=
                  16.0 * (g_lambda(A, p) + g_lambda(B, p)) * (1.0 + 1e-12) + 1e-12);
        }
    }
}

TEST_CASE("rotation invariance of the envelope") {
    auto gen = testing::rng(61);
    std::uniform_real_distribution<double> angle(-M_PI, M_PI);
    for (double lambda : {1.0, 25.0}) {
        const EnergyParams p(lambda);
        for (int it = 0; it < 20000; ++it) {
            const Sym2d xi = random_sym(gen, 2.0 * std::sqrt(lambda));
            const double th = angle(gen);
            CHECK(qc_envelope(conjugate(xi, th), p) ==
                  doctest::Approx(qc_envelope(xi, p)).epsilon(1e-12));
        }
    }
}

TEST_CASE("smoothed densities converge linearly in eps") {
    auto gen = testing::rng(67);
    std::vector<Sym2d> test_set;
    for (int it = 0; it < 200; ++it) test_set.push_back(random_sym(gen, 5.0));
    const EnergyParams base(9.0);
    double prev = 1e300;
    for (double eps : {4e-1, 2e-1, 1e-1, 5e-2, 2.5e-2}) {
        EnergyParams p = base;
        p.smooth_eps = eps;
        double sup = 0.0;
        for (const Sym2d& xi : test_set)
            sup = std::max(sup, std::abs(g_lambda_smooth(xi, p) - g_lambda(xi, base)));
        CHECK(sup <= 6.0 * eps);  // linear envelope
        CHECK(sup <= prev + 1e-12);
        prev = sup;
    }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "michell/airy.hpp"
#include "michell/density.hpp"
#include "michell/grid.hpp"
#include "test_helpers.hpp"

using namespace michell;

namespace {

ScalarField quadratic_field(const Grid2D& g, const Sym2d& m) {
    ScalarField u(g);
    u.fill([&](double x, double y) {
        return 0.5 * (m.a * x * x + 2.0 * m.b * x * y + m.d * y * y);
    });
    return u;
}

ClampData quadratic_data(const Grid2D& g, const Sym2d& m) {
    return ClampData::from_potential(
        g,
        [&](double x, double y) { return 0.5 * (m.a * x * x + 2.0 * m.b * x * y + m.d * y * y); },
        [&](double x, double y) { return m.a * x + m.b * y; },
        [&](double x, double y) { return m.b * x + m.d * y; });
}

}  // namespace

TEST_CASE("discrete hessian is exact on quadratics") {
    const Grid2D g = unit_square_grid(17);
    const ScalarField u1 = quadratic_field(g, Sym2d::Diagonal(1.0, 0.0));
    const Sym2d h1 = discrete_hessian(u1, 8, 8);
    CHECK(h1.a == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(h1.b == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(h1.d == doctest::Approx(0.0).epsilon(1e-13));

    const ScalarField u2 = quadratic_field(g, Sym2d(0.0, 1.0, 0.0));
    const Sym2d h2 = discrete_hessian(u2, 5, 11);
    CHECK(h2.b == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("hessian requires populated ghosts") {
    const Grid2D g = unit_square_grid(8);
    ScalarField u(g);
    CHECK_THROWS_AS(discrete_hessian(u, 3, 3), std::logic_error);
}

TEST_CASE("discrete hessian converges at second order") {
    auto err_at = [](int n) {
        const Grid2D g(n, n, 2.0 * M_PI / (n - 1));
        ScalarField u(g);
        u.fill([](double x, double y) { return std::sin(x) * std::sin(y); });
        double worst = 0.0;
        for (int j = 0; j < g.ny; j += 3)
            for (int i = 0; i < g.nx; i += 3) {
                const double x = g.x(i), y = g.y(j);
                const Sym2d exact{-std::sin(x) * std::sin(y), std::cos(x) * std::cos(y),
                                  -std::sin(x) * std::sin(y)};
                const Sym2d got = discrete_hessian(u, i, j);
                worst = std::max({worst, std::abs(got.a - exact.a), std::abs(got.b - exact.b),
                                  std::abs(got.d - exact.d)});
            }
        return worst;
    };
    const double e1 = err_at(65), e2 = err_at(129);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("clamped boundary with zero data mirrors the interior") {
    const Grid2D g = unit_square_grid(9);
    ScalarField u(g);
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i) u(i, j) = d(gen);
    apply_clamped_boundary(u, ClampData::zero(g), GhostMode::Clamped);
    for (int i = 0; i < g.nx; ++i) {
        CHECK(u(i, 0) == 0.0);
        CHECK(u(i, -1) == u(i, 1));
        CHECK(u(i, g.ny) == u(i, g.ny - 2));
    }
    for (int j = 0; j < g.ny; ++j) {
        CHECK(u(0, j) == 0.0);
        CHECK(u(-1, j) == u(1, j));
    }
}

TEST_CASE("clamped boundary reconstructs quadratic traces exactly") {
    const Grid2D g = unit_square_grid(12);
    const Sym2d m(1.3, -0.4, 0.8);
    const ScalarField exact = quadratic_field(g, m);
    ScalarField u(g);
    for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i) u(i, j) = exact(i, j);
    apply_clamped_boundary(u, quadratic_data(g, m), GhostMode::Clamped);
    for (int j = -2; j <= g.ny + 1; ++j)
        for (int i = -2; i <= g.nx + 1; ++i)
            CHECK(u(i, j) == doctest::Approx(exact(i, j)).epsilon(1e-11));
    // Hessians at boundary-adjacent nodes come out exact as well.
    const Sym2d h = discrete_hessian(u, 1, 1);
    CHECK(h.a == doctest::Approx(m.a).epsilon(1e-10));
    CHECK(h.b == doctest::Approx(m.b).epsilon(1e-10));
    CHECK(h.d == doctest::Approx(m.d).epsilon(1e-10));
}

TEST_CASE("free-ghost mode reconstructs quadratics and their normal trace") {
    const Grid2D g = unit_square_grid(12);
    const Sym2d m(0.7, 0.5, -1.1);
    const ScalarField exact = quadratic_field(g, m);
    ScalarField u(g);
    for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i) u(i, j) = exact(i, j);
    apply_clamped_boundary(u, quadratic_data(g, m), GhostMode::Free);
    for (int j = -2; j <= g.ny + 1; ++j)
        for (int i = -2; i <= g.nx + 1; ++i)
            CHECK(u(i, j) == doctest::Approx(exact(i, j)).epsilon(1e-10));
    const BoundaryTrace t = gamma1_trace(u);
    const ClampData data = quadratic_data(g, m);
    for (int i = 0; i < g.nx; ++i)
        CHECK(t.bottom[i] == doctest::Approx(data.f2_bottom[i]).epsilon(1e-10));
}

TEST_CASE("apply_clamped_boundary is idempotent") {
    const Grid2D g = unit_square_grid(10);
    const ClampData data = quadratic_data(g, Sym2d(0.4, 0.2, -0.9));
    ScalarField u(g);
    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i) u(i, j) = d(gen);
    apply_clamped_boundary(u, data, GhostMode::Clamped);
    ScalarField once = u;
    apply_clamped_boundary(u, data, GhostMode::Clamped);
    for (int j = -2; j <= g.ny + 1; ++j)
        for (int i = -2; i <= g.nx + 1; ++i) CHECK(u(i, j) == once(i, j));
}

TEST_CASE("energy quadrature is exact for constant integrands") {
    const Grid2D g = unit_square_grid(33);
    const Sym2d m = Sym2d::Diagonal(1.0, -2.0);
    const ScalarField u = quadratic_field(g, m);
    const double e_limit = energy_quadrature(u, [](const Sym2d& h) { return limit_density(h); });
    CHECK(e_limit == doctest::Approx(2.0 * rho0(m)).epsilon(1e-12));

    const EnergyParams p(1e4);
    const double e_g = energy_quadrature(u, [&](const Sym2d& h) { return g_lambda(h, p); });
    CHECK(e_g == doctest::Approx(2.0 * rho0(m) - 2.0 / std::sqrt(1e4) * std::abs(det(m)))
                     .epsilon(1e-12));

    ScalarField z(g);
    z.fill([](double, double) { return 0.0; });
    CHECK(energy_quadrature(z, [](const Sym2d& h) { return limit_density(h); }) == 0.0);
    CHECK(boundary_penalty(z, ClampData::zero(g)) == 0.0);
}

TEST_CASE("div cof hessian vanishes for arbitrary fields") {
    const Grid2D g = unit_square_grid(32);
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        ScalarField u(g);
        for (int j = -2; j <= g.ny + 1; ++j)
            for (int i = -2; i <= g.nx + 1; ++i) u(i, j) = d(gen);
        u.set_ghosts_populated(true);
        const Sym2Field sigma = stress_from_potential(u);
        const double scale = std::max({sigma.a.abs().maxCoeff(), sigma.b.abs().maxCoeff(),
                                       sigma.d.abs().maxCoeff()}) /
                             g.h;
        CHECK(stress_divergence_max(sigma, g) <= 1e-12 * scale);
    }
}

TEST_CASE("quadrature converges at second order on smooth energies") {
    auto energy_at = [](int n) {
        const Grid2D g(n, n, 1.0 / (n - 1));
        ScalarField u(g);
        u.fill([](double x, double y) { return std::sin(M_PI * x) * std::sin(M_PI * y); });
        return energy_quadrature(u, [](const Sym2d& h) { return squared_norm(h); });
    };
    // Integral of |hessian|^2 of sin(pi x) sin(pi y) over the square:
    // pi^4 (1/4 + 2/4 + 1/4) = pi^4.
    const double exact = std::pow(M_PI, 4);
    const double e1 = std::abs(energy_at(33) - exact);
    const double e2 = std::abs(energy_at(65) - exact);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("field csv round trip") {
    const Grid2D g(7, 5, 0.25, -0.5, 0.25);
    ScalarField u(g);
    u.fill([](double x, double y) { return x * x - 3.0 * y + 0.25 * x * y; });
    const std::string path = "test_field_roundtrip.csv";
    write_field_csv(u, path);
    const ScalarField v = read_field_csv(path);
    CHECK(v.grid().nx == g.nx);
    CHECK(v.grid().ny == g.ny);
    CHECK(v.grid().h == doctest::Approx(g.h));
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) CHECK(v(i, j) == u(i, j));
    std::remove(path.c_str());
}

TEST_CASE("grid validation") {
    CHECK_THROWS(Grid2D(3, 10, 0.1));
    CHECK_THROWS(Grid2D(10, 10, 0.0));
}

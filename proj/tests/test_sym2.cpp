#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "michell/sym2.hpp"
#include "test_helpers.hpp"

using namespace michell;
using michell::testing::random_sym;

TEST_CASE("eigenvalues of simple matrices") {
    auto [l1, l2] = eigenvalues(Sym2d::Diagonal(3.0, -4.0));
    CHECK(l1 == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(l2 == doctest::Approx(-4.0).epsilon(1e-14));

    auto [m1, m2] = eigenvalues(Sym2d(0.0, 1.0, 0.0));
    CHECK(m1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(m2 == doctest::Approx(-1.0).epsilon(1e-14));

    auto [i1, i2] = eigenvalues(Sym2d::Identity());
    CHECK(i1 == 1.0);
    CHECK(i2 == 1.0);
}

TEST_CASE("eigenvalue pair reproduces trace and determinant") {
    auto gen = testing::rng();
    for (int it = 0; it < 100000; ++it) {
        const Sym2d m = random_sym(gen, 10.0);
        const auto [l1, l2] = eigenvalues(m);
        CHECK(l1 >= l2);
        CHECK(l1 + l2 == doctest::Approx(trace(m)).epsilon(1e-14));
        CHECK(l1 * l2 == doctest::Approx(det(m)).epsilon(1e-12));
    }
}

TEST_CASE("rho0 basics") {
    CHECK(rho0(Sym2d::Diagonal(3.0, -4.0)) == doctest::Approx(7.0));
    CHECK(rho0(Sym2d(0.0, 1.0, 0.0)) == doctest::Approx(2.0));
    CHECK(rho0(Sym2d::Zero()) == 0.0);
}

TEST_CASE("frobenius bounds |m| <= rho0(m) <= 2|m|") {
    auto gen = testing::rng(7);
    for (int it = 0; it < 100000; ++it) {
        const Sym2d m = random_sym(gen, 5.0);
        const double r = rho0(m), n = norm(m);
        CHECK(n <= r * (1.0 + 1e-12) + 1e-15);
        CHECK(r <= 2.0 * n * (1.0 + 1e-12) + 1e-15);
    }
}

TEST_CASE("rho0 is sublinear and positively 1-homogeneous") {
    auto gen = testing::rng(11);
    for (int it = 0; it < 20000; ++it) {
        const Sym2d a = random_sym(gen, 3.0), b = random_sym(gen, 3.0);
        CHECK(rho0(a + b) <= rho0(a) + rho0(b) + 1e-12);
        const double c = std::abs(random_sym(gen, 2.0).a);
        CHECK(rho0(c * a) == doctest::Approx(c * rho0(a)).epsilon(1e-12));
    }
}

TEST_CASE("cofactor swaps diagonal and negates off-diagonal") {
    const Sym2d c = cof(Sym2d::Diagonal(1.0, 0.0));
    CHECK(c.a == 0.0);
    CHECK(c.d == 1.0);

    const Sym2d m(1.0, 2.0, 3.0);
    const Sym2d cm = cof(m);
    CHECK(cm.a == 3.0);
    CHECK(cm.b == -2.0);
    CHECK(cm.d == 1.0);

    const Sym2d id = cof(Sym2d::Identity());
    CHECK(id.a == 1.0);
    CHECK(id.b == 0.0);
    CHECK(id.d == 1.0);
}

TEST_CASE("cofactor is an exact involution") {
    auto gen = testing::rng(3);
    for (int it = 0; it < 1000; ++it) {
        const Sym2d m = random_sym(gen, 100.0);
        const Sym2d back = cof(cof(m));
        CHECK(back.a == m.a);
        CHECK(back.b == m.b);
        CHECK(back.d == m.d);
    }
}

TEST_CASE("conjugation by rotations") {
    const Sym2d m(0.7, -0.2, 1.3);
    const Sym2d same = conjugate(m, 0.0);
    CHECK(same.a == doctest::Approx(m.a));
    CHECK(same.b == doctest::Approx(m.b));
    CHECK(same.d == doctest::Approx(m.d));

    // Oracle: direct 2x2 matrix product R^T M R.
    const Sym2d r = conjugate(Sym2d::Diagonal(1.0, -1.0), M_PI / 4.0);
    CHECK(r.a == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(r.b == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(r.d == doctest::Approx(0.0).epsilon(1e-14));

    const Sym2d id = conjugate(Sym2d::Identity(), 1.234);
    CHECK(id.a == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(id.b == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(id.d == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("conjugation preserves eigenvalues and rho0") {
    auto gen = testing::rng(19);
    std::uniform_real_distribution<double> angle(-M_PI, M_PI);
    for (int it = 0; it < 20000; ++it) {
        const Sym2d m = random_sym(gen, 8.0);
        const double th = angle(gen);
        const Sym2d c = conjugate(m, th);
        const auto [l1, l2] = eigenvalues(m);
        const auto [c1, c2] = eigenvalues(c);
        CHECK(c1 == doctest::Approx(l1).epsilon(1e-13));
        CHECK(c2 == doctest::Approx(l2).epsilon(1e-13));
        CHECK(rho0(c) == doctest::Approx(rho0(m)).epsilon(1e-12));
    }
}

TEST_CASE("conjugation matches Eigen matrix arithmetic") {
    auto gen = testing::rng(23);
    std::uniform_real_distribution<double> angle(-M_PI, M_PI);
    for (int it = 0; it < 1000; ++it) {
        const Sym2d m = random_sym(gen, 4.0);
        const double th = angle(gen);
        Eigen::Matrix2d R;
        R << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
        const Eigen::Matrix2d ref = R.transpose() * m.matrix() * R;
        const Sym2d c = conjugate(m, th);
        CHECK(c.a == doctest::Approx(ref(0, 0)).epsilon(1e-13));
        CHECK(c.b == doctest::Approx(ref(0, 1)).epsilon(1e-13));
        CHECK(c.d == doctest::Approx(ref(1, 1)).epsilon(1e-13));
    }
}

#ifndef MICHELL_SYM2_HPP
#define MICHELL_SYM2_HPP

#include <Eigen/Core>
#include <cmath>
#include <utility>

namespace michell {

/// 2x2 symmetric matrix with a single off-diagonal slot. Used for both
/// stresses and Hessians of scalar potentials.
template <typename Scalar>
struct Sym2 {
    Scalar a{0};  // entry (1,1)
    Scalar b{0};  // entry (1,2) = (2,1)
    Scalar d{0};  // entry (2,2)

    Sym2() = default;
    Sym2(Scalar a_, Scalar b_, Scalar d_) : a(a_), b(b_), d(d_) {}

    static Sym2 Zero() { return {Scalar(0), Scalar(0), Scalar(0)}; }
    static Sym2 Identity() { return {Scalar(1), Scalar(0), Scalar(1)}; }
    static Sym2 Diagonal(Scalar x, Scalar y) { return {x, Scalar(0), y}; }
    /// alpha * eta(theta) (x) eta(theta) with eta = (cos theta, sin theta).
    static Sym2 OuterSquare(Scalar theta, Scalar alpha) {
        const Scalar c = std::cos(theta), s = std::sin(theta);
        return {alpha * c * c, alpha * c * s, alpha * s * s};
    }

    Eigen::Matrix<Scalar, 2, 2> matrix() const {
        Eigen::Matrix<Scalar, 2, 2> m;
        m << a, b, b, d;
        return m;
    }

    Sym2 operator+(const Sym2& o) const { return {a + o.a, b + o.b, d + o.d}; }
    Sym2 operator-(const Sym2& o) const { return {a - o.a, b - o.b, d - o.d}; }
    Sym2 operator-() const { return {-a, -b, -d}; }
    Sym2 operator*(Scalar c) const { return {c * a, c * b, c * d}; }
    Sym2& operator+=(const Sym2& o) {
        a += o.a; b += o.b; d += o.d;
        return *this;
    }

    bool is_zero() const { return a == Scalar(0) && b == Scalar(0) && d == Scalar(0); }
};

template <typename Scalar>
Sym2<Scalar> operator*(Scalar c, const Sym2<Scalar>& m) { return m * c; }

template <typename Scalar>
Scalar trace(const Sym2<Scalar>& m) { return m.a + m.d; }

template <typename Scalar>
Scalar det(const Sym2<Scalar>& m) { return m.a * m.d - m.b * m.b; }

/// Frobenius norm, |m|^2 = a^2 + 2 b^2 + d^2.
template <typename Scalar>
Scalar norm(const Sym2<Scalar>& m) {
    return std::sqrt(m.a * m.a + Scalar(2) * m.b * m.b + m.d * m.d);
}

template <typename Scalar>
Scalar squared_norm(const Sym2<Scalar>& m) {
    return m.a * m.a + Scalar(2) * m.b * m.b + m.d * m.d;
}

/// Eigenvalues m +- r with m = (a+d)/2 and r = hypot((a-d)/2, b), sorted
/// descending. hypot keeps r accurate near repeated eigenvalues.
template <typename Scalar>
std::pair<Scalar, Scalar> eigenvalues(const Sym2<Scalar>& m) {
    const Scalar mid = (m.a + m.d) / Scalar(2);
    const Scalar r = std::hypot((m.a - m.d) / Scalar(2), m.b);
    return {mid + r, mid - r};
}

/// rho^0(m) = |lambda_1| + |lambda_2|, the spectral 1-norm of a symmetric
/// 2x2 matrix. Sublinear, positively one-homogeneous, zero iff m = 0.
template <typename Scalar>
Scalar rho0(const Sym2<Scalar>& m) {
    const auto [l1, l2] = eigenvalues(m);
    return std::abs(l1) + std::abs(l2);
}

/// Cofactor: swaps the diagonal entries and negates the off-diagonal.
/// An involution: cof(cof(m)) == m exactly.
template <typename Scalar>
Sym2<Scalar> cof(const Sym2<Scalar>& m) {
    return {m.d, -m.b, m.a};
}

/// R^T m R for the rotation R = [[cos t, -sin t], [sin t, cos t]].
template <typename Scalar>
Sym2<Scalar> conjugate(const Sym2<Scalar>& m, Scalar theta) {
    const Scalar c = std::cos(theta), s = std::sin(theta);
    const Scalar cc = c * c, ss = s * s, cs = c * s;
    return {m.a * cc + Scalar(2) * m.b * cs + m.d * ss,
            m.b * (cc - ss) + (m.d - m.a) * cs,
            m.a * ss - Scalar(2) * m.b * cs + m.d * cc};
}

using Sym2d = Sym2<double>;

}  // namespace michell

#endif

#ifndef MICHELL_TEST_HELPERS_HPP
#define MICHELL_TEST_HELPERS_HPP

#include <random>

#include "michell/sym2.hpp"

namespace michell::testing {

inline std::mt19937_64 rng(unsigned seed = 12345) { return std::mt19937_64(seed); }

inline Sym2d random_sym(std::mt19937_64& gen, double scale = 1.0) {
    std::uniform_real_distribution<double> d(-scale, scale);
    return {d(gen), d(gen), d(gen)};
}

/// Central finite difference of f at x with step h.
template <typename F>
double central_diff(const F& f, double x, double h = 1e-6) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace michell::testing

#endif

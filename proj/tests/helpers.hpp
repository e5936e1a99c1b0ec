#pragma once

#include <complex>
#include <random>

// Shared test utilities: a deterministically seeded generator per test case
// and absolute/relative closeness checks for doubles and complex values.

namespace testutil {

inline std::mt19937_64 rng(unsigned seed = 0xC0FFEE) {
    return std::mt19937_64{seed};
}

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline bool close(double a, double b, double tol) {
    return std::abs(a - b) <= tol;
}

inline bool close(std::complex<double> a, std::complex<double> b, double tol) {
    return std::abs(a - b) <= tol;
}

inline bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

} // namespace testutil

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "subthz/types.hpp"

namespace testutil {

using subthz::cplx;
using subthz::CVector;

// Direct O(n^2) unitary DFT; sign -1 forward, +1 inverse.
inline CVector naive_dft(const CVector& x, int sign) {
    const std::size_t n = x.size();
    CVector out(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc{};
        for (std::size_t i = 0; i < n; ++i) {
            const double a = sign * 2.0 * std::numbers::pi * static_cast<double>(k * i % n) / static_cast<double>(n);
            acc += x[i] * cplx(std::cos(a), std::sin(a));
        }
        out[k] = acc / std::sqrt(static_cast<double>(n));
    }
    return out;
}

inline CVector random_complex(std::size_t n, std::uint64_t seed, double sigma = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, sigma / std::sqrt(2.0));
    CVector v(n);
    for (auto& x : v) x = {g(rng), g(rng)};
    return v;
}

inline std::vector<std::uint8_t> random_bits(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::uint8_t> b(n);
    for (auto& x : b) x = static_cast<std::uint8_t>(rng() & 1U);
    return b;
}

inline double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double energy(std::span<const cplx> a) {
    double e = 0.0;
    for (const auto& v : a) e += std::norm(v);
    return e;
}

// Standard normal tail probability.
inline double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace testutil

#include "subthz/modulation.hpp"

#include <cmath>
#include <random>

namespace subthz {

int bits_per_symbol(Modulation mod) {
    switch (mod) {
        case Modulation::Qpsk: return 2;
        case Modulation::Qam16: return 4;
        case Modulation::Qam64: return 6;
        case Modulation::Qam256: return 8;
    }
    return 0;
}

std::string to_string(Modulation mod) {
    switch (mod) {
        case Modulation::Qpsk: return "qpsk";
        case Modulation::Qam16: return "16qam";
        case Modulation::Qam64: return "64qam";
        case Modulation::Qam256: return "256qam";
    }
    return "?";
}

Modulation parse_modulation(const std::string& name) {
    if (name == "qpsk") return Modulation::Qpsk;
    if (name == "16qam") return Modulation::Qam16;
    if (name == "64qam") return Modulation::Qam64;
    if (name == "256qam") return Modulation::Qam256;
    throw ConfigError("unknown modulation '" + name + "'");
}

std::vector<int> pam_levels(int bits_per_dimension) {
    // Recursive Gray construction: a = (1-2b0)(2^{m-1} - (1-2b1)(2^{m-2} - ...)).
    const int count = 1 << bits_per_dimension;
    std::vector<int> levels(static_cast<std::size_t>(count));
    for (int pattern = 0; pattern < count; ++pattern) {
        int amplitude = 1;
        for (int i = bits_per_dimension - 1; i >= 1; --i) {
            const int bit = (pattern >> (bits_per_dimension - 1 - i)) & 1;
            amplitude = (1 << (bits_per_dimension - i)) - (1 - 2 * bit) * amplitude;
        }
        const int sign_bit = (pattern >> (bits_per_dimension - 1)) & 1;
        levels[static_cast<std::size_t>(pattern)] = (1 - 2 * sign_bit) * amplitude;
    }
    return levels;
}

double qam_scale(Modulation mod) {
    const int m = bits_per_symbol(mod) / 2;
    const double order = static_cast<double>(1 << (2 * m));
    return 1.0 / std::sqrt(2.0 * (order - 1.0) / 3.0);
}

namespace {

cplx map_one(const std::uint8_t* b, int m, const std::vector<int>& levels, double scale) {
    int pi = 0;
    int pq = 0;
    for (int i = 0; i < m; ++i) {
        pi = (pi << 1) | (b[2 * i] & 1);
        pq = (pq << 1) | (b[2 * i + 1] & 1);
    }
    return {levels[static_cast<std::size_t>(pi)] * scale, levels[static_cast<std::size_t>(pq)] * scale};
}

}  // namespace

CVector map_bits(std::span<const std::uint8_t> bits, Modulation mod) {
    const int k = bits_per_symbol(mod);
    if (bits.size() % static_cast<std::size_t>(k) != 0) {
        throw InputError("map_bits: bit count not a multiple of bits per symbol");
    }
    const int m = k / 2;
    const auto levels = pam_levels(m);
    const double scale = qam_scale(mod);
    CVector out(bits.size() / static_cast<std::size_t>(k));
    for (std::size_t s = 0; s < out.size(); ++s) {
        out[s] = map_one(bits.data() + s * static_cast<std::size_t>(k), m, levels, scale);
    }
    return out;
}

CVector constellation(Modulation mod) {
    const int k = bits_per_symbol(mod);
    const int count = 1 << k;
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(count * k));
    for (int idx = 0; idx < count; ++idx) {
        for (int i = 0; i < k; ++i) {
            bits[static_cast<std::size_t>(idx * k + i)] =
                static_cast<std::uint8_t>((idx >> (k - 1 - i)) & 1);
        }
    }
    return map_bits(bits, mod);
}

CVector random_symbols(std::size_t count, Modulation mod, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const int k = bits_per_symbol(mod);
    std::vector<std::uint8_t> bits(count * static_cast<std::size_t>(k));
    for (auto& b : bits) {
        b = static_cast<std::uint8_t>(rng() & 1U);
    }
    return map_bits(bits, mod);
}

}  // namespace subthz

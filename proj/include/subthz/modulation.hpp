#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "subthz/types.hpp"

namespace subthz {

enum class Modulation { Qpsk, Qam16, Qam64, Qam256 };

int bits_per_symbol(Modulation mod);
std::string to_string(Modulation mod);
Modulation parse_modulation(const std::string& name);

/// Gray-mapped PAM levels for one dimension, indexed by the dimension's bit
/// pattern (first bit most significant). Unnormalised odd integers.
std::vector<int> pam_levels(int bits_per_dimension);

/// Normalisation applied to the odd-integer grid so that E|x|^2 = 1.
double qam_scale(Modulation mod);

/// Square Gray QAM. Bit i of a symbol drives the in-phase axis when i is
/// even and the quadrature axis when i is odd; within an axis the first bit
/// selects the sign. "00" in QPSK maps to (1+j)/sqrt(2).
CVector map_bits(std::span<const std::uint8_t> bits, Modulation mod);

/// All 2^k points, indexed by the integer whose big-endian bits feed map_bits.
CVector constellation(Modulation mod);

/// Random QAM symbols drawn from the given engine seed.
CVector random_symbols(std::size_t count, Modulation mod, std::uint64_t seed);

}  // namespace subthz

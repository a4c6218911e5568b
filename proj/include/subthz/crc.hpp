#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace subthz {

inline constexpr int kCrcBits = 24;

/// CRC-24A (generator 0x864CFB, zero init, no reflection) over a bit
/// sequence, first bit most significant.
std::uint32_t crc24a(std::span<const std::uint8_t> bits);

/// Returns bits followed by their 24 CRC bits.
std::vector<std::uint8_t> crc_attach(std::span<const std::uint8_t> bits);

/// True when the trailing 24 bits are the CRC of the rest.
bool crc_check(std::span<const std::uint8_t> bits_with_crc);

}  // namespace subthz

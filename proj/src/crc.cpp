#include "subthz/crc.hpp"

#include <boost/crc.hpp>

#include "subthz/errors.hpp"

namespace subthz {

using Crc24a = boost::crc_optimal<24, 0x864CFB, 0, 0, false, false>;

std::uint32_t crc24a(std::span<const std::uint8_t> bits) {
    // Leading zero bits leave a zero-initialised CRC unchanged, so pad the
    // front up to a byte boundary and feed whole bytes.
    const std::size_t pad = (8 - bits.size() % 8) % 8;
    std::vector<std::uint8_t> bytes((bits.size() + pad) / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        const std::size_t pos = i + pad;
        if (bits[i] & 1U) {
            bytes[pos / 8] |= static_cast<std::uint8_t>(0x80U >> (pos % 8));
        }
    }
    Crc24a crc;
    crc.process_bytes(bytes.data(), bytes.size());
    return crc.checksum();
}

std::vector<std::uint8_t> crc_attach(std::span<const std::uint8_t> bits) {
    std::vector<std::uint8_t> out(bits.begin(), bits.end());
    const auto c = crc24a(bits);
    for (int i = kCrcBits - 1; i >= 0; --i) {
        out.push_back(static_cast<std::uint8_t>((c >> i) & 1U));
    }
    return out;
}

bool crc_check(std::span<const std::uint8_t> bits_with_crc) {
    if (bits_with_crc.size() < static_cast<std::size_t>(kCrcBits)) {
        throw InputError("crc_check: sequence shorter than the CRC");
    }
    // The CRC of a message followed by its own CRC is zero.
    return crc24a(bits_with_crc) == 0;
}

}  // namespace subthz

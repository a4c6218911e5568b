#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace subthz {

/// SplitMix64 finaliser; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Combines a sequence of integers into one seed (order sensitive).
constexpr std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0x6A09E667F3BCC908ULL;
    for (auto p : parts) {
        h = mix64(h ^ mix64(p));
    }
    return h;
}

/// Stable 64-bit FNV-1a hash of a label, used for stream domain separation.
constexpr std::uint64_t label_hash(std::string_view label) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : label) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

/// Sub-seed for a named random stream derived from a parent seed.
constexpr std::uint64_t stream_seed(std::uint64_t parent, std::string_view domain) {
    return derive_seed({parent, label_hash(domain)});
}

}  // namespace subthz

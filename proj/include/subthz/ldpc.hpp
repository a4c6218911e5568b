#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace subthz {

/// Nonzero entry of the base matrix: block row, block column, cyclic shift.
struct BaseEntry {
    int row = 0;
    int col = 0;
    int shift = 0;
};

/// Rate-2/3 quasi-cyclic LDPC code with a base-graph-1 style protograph:
/// 13 block rows, 35 block columns, 22 systematic columns of which the first
/// two are punctured, a double-diagonal core parity part (columns 22-25) and
/// single-parity extension columns 26-34.
///
/// A code is sized for a number of transmitted bits G. The lifting size is
/// Z = ceil(G/33); the 33Z - G surplus is removed by shortening the tail of
/// the systematic part with known zero (filler) bits, which are neither
/// transmitted nor counted as information.
class QcLdpcCode {
public:
    static constexpr int kBaseRows = 13;
    static constexpr int kBaseCols = 35;
    static constexpr int kInfoCols = 22;
    static constexpr int kPuncturedCols = 2;
    static constexpr int kTransmittedCols = kBaseCols - kPuncturedCols;

    /// Code whose transmitted length is exactly `coded_bits`.
    static QcLdpcCode for_coded_bits(int coded_bits);

    int lifting_size() const { return z_; }
    int filler_bits() const { return filler_; }
    /// Information bits per codeword (including any CRC the caller attaches).
    int info_bits() const { return kInfoCols * z_ - filler_; }
    int coded_bits() const { return kTransmittedCols * z_ - filler_; }
    int codeword_bits() const { return kBaseCols * z_; }
    double rate() const { return static_cast<double>(info_bits()) / coded_bits(); }
    const std::vector<BaseEntry>& entries() const { return entries_; }

    /// Full mother codeword (35Z bits, fillers included as zeros).
    std::vector<std::uint8_t> encode_full(std::span<const std::uint8_t> info) const;

    /// Transmitted bits: mother codeword without the punctured columns and
    /// the filler positions. Throws InputError on a length mismatch.
    std::vector<std::uint8_t> encode(std::span<const std::uint8_t> info) const;

    /// True when H c = 0 for a full mother codeword.
    bool check(std::span<const std::uint8_t> codeword) const;

    /// Mother-code position of transmitted bit i.
    int transmitted_position(int i) const;

private:
    QcLdpcCode(int z, int filler);
    int filler_start() const { return kInfoCols * z_ - filler_; }

    int z_;
    int filler_;
    std::vector<BaseEntry> entries_;
};

struct LdpcDecoderSettings {
    int max_iterations = 25;
    float normalization = 0.8f;
};

struct LdpcDecodeResult {
    std::vector<std::uint8_t> info;  // hard decisions on the information bits
    bool parity_ok = false;
    int iterations = 0;
};

/// Layered normalised min-sum decoding. `llrs` has one value per transmitted
/// bit, positive meaning bit 0. Punctured bits start at zero and filler bits
/// are pinned to a large positive value. Stops as soon as every parity check
/// holds.
LdpcDecodeResult ldpc_decode(const QcLdpcCode& code, std::span<const float> llrs,
                             const LdpcDecoderSettings& settings = {});

}  // namespace subthz

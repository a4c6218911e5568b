#include "subthz/ldpc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "subthz/errors.hpp"
#include "subthz/rng.hpp"

namespace subthz {
namespace {

struct ProtoRow {
    std::vector<int> info;
    std::vector<int> parity;
};

// Systematic connectivity of each block row plus the parity columns beyond
// the core; core parity (columns 22-25) for rows 0-3 is fixed below.
const std::array<ProtoRow, QcLdpcCode::kBaseRows>& protograph() {
    static const std::array<ProtoRow, QcLdpcCode::kBaseRows> rows{{
        {{0, 1, 2, 3, 5, 6, 9, 10, 11, 12, 13, 15, 16, 18, 19, 20, 21}, {}},
        {{0, 2, 3, 4, 5, 7, 8, 9, 11, 12, 14, 15, 16, 17, 19, 21}, {}},
        {{0, 1, 2, 4, 5, 6, 7, 8, 9, 10, 13, 17, 18, 19, 20}, {}},
        {{0, 1, 3, 4, 6, 7, 8, 10, 11, 12, 13, 14, 16, 17, 18, 20, 21}, {}},
        {{0, 1}, {26}},
        {{0, 3, 12, 16, 21}, {22, 27}},
        {{0, 6, 10, 11, 13, 17, 18, 20}, {28}},
        {{0, 1, 4, 7, 8, 14}, {29}},
        {{0, 1, 3, 12, 16, 19, 21}, {22, 24, 30}},
        {{0, 1, 10, 11, 13, 17, 18, 20}, {31}},
        {{1, 2, 4, 7, 8, 14}, {32}},
        {{0, 1, 12, 16, 21}, {22, 23, 33}},
        {{0, 1, 10, 11, 13, 18}, {34}},
    }};
    return rows;
}

int positive_mod(long a, int z) {
    const long r = a % z;
    return static_cast<int>(r < 0 ? r + z : r);
}

// Draws shifts for the free entries, re-drawing any that would close a
// length-4 cycle with already placed entries (up to a bounded number of tries).
std::vector<BaseEntry> build_entries(int z) {
    constexpr int kRows = QcLdpcCode::kBaseRows;
    constexpr int kCols = QcLdpcCode::kBaseCols;
    std::array<std::array<int, kCols>, kRows> shift{};
    for (auto& r : shift) {
        r.fill(-1);
    }
    // Core double-diagonal parity.
    shift[0][22] = 1 % z;
    shift[0][23] = 0;
    shift[1][22] = 0;
    shift[1][23] = 0;
    shift[1][24] = 0;
    shift[2][24] = 0;
    shift[2][25] = 0;
    shift[3][22] = 1 % z;
    shift[3][25] = 0;

    std::mt19937_64 rng(derive_seed({label_hash("qc-ldpc-shifts"), static_cast<std::uint64_t>(z)}));
    std::uniform_int_distribution<int> pick(0, z - 1);

    auto closes_four_cycle = [&](int r, int c, int s) {
        for (int r2 = 0; r2 < kRows; ++r2) {
            if (r2 == r || shift[r2][c] < 0) continue;
            for (int c2 = 0; c2 < kCols; ++c2) {
                if (c2 == c || shift[r][c2] < 0 || shift[r2][c2] < 0) continue;
                const long d = static_cast<long>(s) - shift[r][c2] + shift[r2][c2] - shift[r2][c];
                if (positive_mod(d, z) == 0) return true;
            }
        }
        return false;
    };

    const auto& rows = protograph();
    for (int r = 0; r < kRows; ++r) {
        std::vector<int> cols = rows[static_cast<std::size_t>(r)].info;
        for (int c : rows[static_cast<std::size_t>(r)].parity) {
            // Extension parity columns are identities to keep encoding trivial.
            if (c >= 26) {
                shift[r][c] = 0;
            } else {
                cols.push_back(c);
            }
        }
        for (int c : cols) {
            int s = pick(rng);
            for (int attempt = 0; attempt < 64 && closes_four_cycle(r, c, s); ++attempt) {
                s = pick(rng);
            }
            shift[r][c] = s;
        }
    }

    std::vector<BaseEntry> entries;
    for (int r = 0; r < kRows; ++r) {
        for (int c = 0; c < kCols; ++c) {
            if (shift[r][c] >= 0) {
                entries.push_back({r, c, shift[r][c]});
            }
        }
    }
    return entries;
}

// out[i] ^= in[(i + s) mod z]
void xor_shifted(std::span<std::uint8_t> out, std::span<const std::uint8_t> in, int s) {
    const auto z = out.size();
    const auto us = static_cast<std::size_t>(s);
    for (std::size_t i = 0; i + us < z; ++i) {
        out[i] ^= in[i + us];
    }
    for (std::size_t i = z - us; i < z; ++i) {
        out[i] ^= in[i + us - z];
    }
}

}  // namespace

QcLdpcCode::QcLdpcCode(int z, int filler) : z_(z), filler_(filler), entries_(build_entries(z)) {}

QcLdpcCode QcLdpcCode::for_coded_bits(int coded_bits) {
    if (coded_bits < kTransmittedCols * 2) {
        throw InputError("QcLdpcCode: too few coded bits");
    }
    const int z = (coded_bits + kTransmittedCols - 1) / kTransmittedCols;
    return QcLdpcCode(z, kTransmittedCols * z - coded_bits);
}

std::vector<std::uint8_t> QcLdpcCode::encode_full(std::span<const std::uint8_t> info) const {
    if (static_cast<int>(info.size()) != info_bits()) {
        throw InputError("QcLdpcCode::encode: info length does not match the code");
    }
    const auto z = static_cast<std::size_t>(z_);
    std::vector<std::uint8_t> cw(static_cast<std::size_t>(codeword_bits()), 0);
    for (std::size_t i = 0; i < info.size(); ++i) {
        cw[i] = info[i] & 1U;
    }
    auto block = [&](int c) { return std::span<std::uint8_t>(cw.data() + c * z, z); };

    // lambda_r: contribution of the systematic columns to row r.
    std::vector<std::vector<std::uint8_t>> lambda(kBaseRows, std::vector<std::uint8_t>(z, 0));
    for (const auto& e : entries_) {
        if (e.col < kInfoCols) {
            xor_shifted(lambda[static_cast<std::size_t>(e.row)], block(e.col), e.shift);
        }
    }
    // Core parity: p0 = sum lambda_0..3; p1 = l0 + P1 p0; p3 = l3 + P1 p0; p2 = l2 + p3.
    auto p0 = block(22);
    for (int r = 0; r < 4; ++r) {
        for (std::size_t i = 0; i < z; ++i) p0[i] ^= lambda[static_cast<std::size_t>(r)][i];
    }
    std::vector<std::uint8_t> p0_shift(z, 0);
    xor_shifted(p0_shift, p0, 1 % z_);
    auto p1 = block(23);
    auto p2 = block(24);
    auto p3 = block(25);
    for (std::size_t i = 0; i < z; ++i) {
        p1[i] = lambda[0][i] ^ p0_shift[i];
        p3[i] = lambda[3][i] ^ p0_shift[i];
        p2[i] = lambda[2][i] ^ p3[i];
    }
    // Extension rows: identity parity column 26 + (r - 4).
    for (const auto& e : entries_) {
        if (e.row >= 4 && e.col < 26) {
            xor_shifted(block(26 + e.row - 4), block(e.col), e.shift);
        }
    }
    return cw;
}

int QcLdpcCode::transmitted_position(int i) const {
    int pos = i + kPuncturedCols * z_;
    if (pos >= filler_start()) {
        pos += filler_;
    }
    return pos;
}

std::vector<std::uint8_t> QcLdpcCode::encode(std::span<const std::uint8_t> info) const {
    const auto cw = encode_full(info);
    std::vector<std::uint8_t> out(static_cast<std::size_t>(coded_bits()));
    const auto punct = static_cast<std::size_t>(kPuncturedCols * z_);
    const auto fstart = static_cast<std::size_t>(filler_start());
    std::copy(cw.begin() + static_cast<long>(punct), cw.begin() + static_cast<long>(fstart), out.begin());
    std::copy(cw.begin() + static_cast<long>(fstart) + filler_, cw.end(),
              out.begin() + static_cast<long>(fstart - punct));
    return out;
}

bool QcLdpcCode::check(std::span<const std::uint8_t> codeword) const {
    if (static_cast<int>(codeword.size()) != codeword_bits()) {
        throw InputError("QcLdpcCode::check: codeword length does not match the code");
    }
    const auto z = static_cast<std::size_t>(z_);
    std::vector<std::vector<std::uint8_t>> syn(kBaseRows, std::vector<std::uint8_t>(z, 0));
    for (const auto& e : entries_) {
        xor_shifted(syn[static_cast<std::size_t>(e.row)],
                    codeword.subspan(static_cast<std::size_t>(e.col) * z, z), e.shift);
    }
    for (const auto& s : syn) {
        if (std::any_of(s.begin(), s.end(), [](std::uint8_t b) { return (b & 1U) != 0; })) {
            return false;
        }
    }
    return true;
}

namespace {

constexpr float kChannelLlrClip = 32.0f;
constexpr float kFillerLlr = 1.0e4f;

}  // namespace

LdpcDecodeResult ldpc_decode(const QcLdpcCode& code, std::span<const float> llrs,
                             const LdpcDecoderSettings& settings) {
    if (static_cast<int>(llrs.size()) != code.coded_bits()) {
        throw InputError("ldpc_decode: LLR count does not match the code");
    }
    const int zi = code.lifting_size();
    const auto z = static_cast<std::size_t>(zi);
    const auto n = static_cast<std::size_t>(code.codeword_bits());

    std::vector<float> post(n, 0.0f);
    const auto fstart = static_cast<std::size_t>(code.info_bits());
    const auto fend = fstart + static_cast<std::size_t>(code.filler_bits());
    for (std::size_t i = fstart; i < fend; ++i) post[i] = kFillerLlr;
    for (std::size_t i = 0; i < llrs.size(); ++i) {
        const float v = std::isnan(llrs[i]) ? 0.0f : std::clamp(llrs[i], -kChannelLlrClip, kChannelLlrClip);
        post[static_cast<std::size_t>(code.transmitted_position(static_cast<int>(i)))] = v;
    }

    // Group entries per block row; messages stored per entry, Z each.
    const auto& entries = code.entries();
    std::vector<std::vector<std::size_t>> row_entries(QcLdpcCode::kBaseRows);
    for (std::size_t e = 0; e < entries.size(); ++e) {
        row_entries[static_cast<std::size_t>(entries[e].row)].push_back(e);
    }
    std::vector<float> msg(entries.size() * z, 0.0f);
    std::size_t max_deg = 0;
    for (const auto& r : row_entries) max_deg = std::max(max_deg, r.size());
    std::vector<float> t(max_deg * z);
    std::vector<float> min1(z), min2(z);
    std::vector<float> sign(z);  // product of the incoming signs, as +-1

    // Entry e links check i to variable col*Z + (i+s) mod Z, which splits
    // into two contiguous runs: checks [0, Z-s) and [Z-s, Z).
    struct Run {
        std::size_t first, count, var;
    };
    auto runs = [&](const BaseEntry& en) {
        const std::size_t base = static_cast<std::size_t>(en.col) * z;
        const auto s = static_cast<std::size_t>(en.shift);
        return std::array<Run, 2>{Run{0, z - s, base + s}, Run{z - s, s, base}};
    };

    auto syndrome_ok = [&]() {
        std::vector<std::uint8_t> acc(z);
        for (const auto& re : row_entries) {
            std::fill(acc.begin(), acc.end(), 0);
            for (auto e : re) {
                for (const Run& r : runs(entries[e])) {
                    std::uint8_t* __restrict a = acc.data() + r.first;
                    const float* __restrict p = post.data() + r.var;
                    for (std::size_t i = 0; i < r.count; ++i) a[i] ^= static_cast<std::uint8_t>(p[i] < 0.0f);
                }
            }
            if (std::any_of(acc.begin(), acc.end(), [](std::uint8_t b) { return b != 0; })) {
                return false;
            }
        }
        return true;
    };

    LdpcDecodeResult result;
    const float alpha = settings.normalization;
    constexpr float kInf = std::numeric_limits<float>::max();
    bool ok = syndrome_ok();
    int iter = 0;
    while (!ok && iter < settings.max_iterations) {
        ++iter;
        for (const auto& re : row_entries) {
            std::fill(min1.begin(), min1.end(), kInf);
            std::fill(min2.begin(), min2.end(), kInf);
            std::fill(sign.begin(), sign.end(), 1.0f);
            for (std::size_t j = 0; j < re.size(); ++j) {
                for (const Run& r : runs(entries[re[j]])) {
                    float* __restrict tj = t.data() + j * z + r.first;
                    const float* __restrict mj = msg.data() + re[j] * z + r.first;
                    const float* __restrict p = post.data() + r.var;
                    float* __restrict m1 = min1.data() + r.first;
                    float* __restrict m2 = min2.data() + r.first;
                    float* __restrict sg = sign.data() + r.first;
                    for (std::size_t i = 0; i < r.count; ++i) {
                        const float x = p[i] - mj[i];
                        tj[i] = x;
                        const float a = std::fabs(x);
                        const float s1 = sg[i];
                        const float v1 = m1[i];
                        const float v2 = m2[i];
                        const float hi = a < v1 ? v1 : a;
                        sg[i] = x < 0.0f ? -s1 : s1;
                        m2[i] = hi < v2 ? hi : v2;
                        m1[i] = a < v1 ? a : v1;
                    }
                }
            }
            for (std::size_t j = 0; j < re.size(); ++j) {
                for (const Run& r : runs(entries[re[j]])) {
                    const float* __restrict tj = t.data() + j * z + r.first;
                    float* __restrict mj = msg.data() + re[j] * z + r.first;
                    float* __restrict p = post.data() + r.var;
                    const float* __restrict m1 = min1.data() + r.first;
                    const float* __restrict m2 = min2.data() + r.first;
                    const float* __restrict sg = sign.data() + r.first;
                    for (std::size_t i = 0; i < r.count; ++i) {
                        const float v1 = m1[i];
                        const float v2 = m2[i];
                        const float x = tj[i];
                        const float sm = sg[i] * alpha * (std::fabs(x) == v1 ? v2 : v1);
                        const float m = x < 0.0f ? -sm : sm;
                        mj[i] = m;
                        p[i] = x + m;
                    }
                }
            }
        }
        ok = syndrome_ok();
    }

    result.parity_ok = ok;
    result.iterations = iter;
    result.info.resize(fstart);
    for (std::size_t i = 0; i < fstart; ++i) {
        result.info[i] = static_cast<std::uint8_t>(post[i] < 0.0f);
    }
    return result;
}

}  // namespace subthz

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "helpers.hpp"
#include "subthz/crc.hpp"
#include "subthz/ldpc.hpp"
#include "subthz/llr.hpp"
#include "subthz/modulation.hpp"

using namespace subthz;

namespace {

// Bit-serial CRC-24A long division.
std::uint32_t crc_oracle(std::span<const std::uint8_t> bits) {
    std::uint32_t reg = 0;
    for (auto b : bits) {
        const bool top = ((reg >> 23) & 1U) != (b & 1U);
        reg = (reg << 1) & 0xFFFFFFU;
        if (top) reg ^= 0x864CFBU;
    }
    return reg;
}

std::vector<float> to_llr(std::span<const std::uint8_t> bits, float mag) {
    std::vector<float> l(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) l[i] = bits[i] ? -mag : mag;
    return l;
}

// Capacity of a binary-input AWGN channel with amplitude 1 and noise std sigma (bits/use).
double biawgn_capacity(double sigma) {
    const int n = 4000;
    const double lo = -12.0;
    const double hi = 12.0;
    const double h = (hi - lo) / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double z = lo + i * h;
        const double pdf = std::exp(-z * z / 2.0) / std::sqrt(2.0 * std::numbers::pi);
        const double y = 1.0 + sigma * z;
        const double f = std::log2(1.0 + std::exp(-2.0 * y / (sigma * sigma)));
        acc += (i == 0 || i == n ? 0.5 : 1.0) * pdf * f;
    }
    return 1.0 - acc * h;
}

// Es/N0 (dB) at which QPSK with Gray labelling carries 2R bits per symbol.
double qpsk_capacity_snr_db(double rate) {
    double lo = -10.0;
    double hi = 10.0;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double es_n0 = std::pow(10.0, mid / 10.0);
        const double sigma = std::sqrt(1.0 / es_n0);  // per-axis amplitude 1/sqrt(2), noise var N0/2
        (biawgn_capacity(sigma) < rate ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Fraction of failed blocks for QPSK over AWGN at Es/N0 = snr_db.
double qpsk_bler(const QcLdpcCode& code, double snr_db, int blocks, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const double n0 = std::pow(10.0, -snr_db / 10.0);
    std::normal_distribution<double> g(0.0, std::sqrt(n0 / 2.0));
    int errors = 0;
    for (int b = 0; b < blocks; ++b) {
        const auto info = testutil::random_bits(static_cast<std::size_t>(code.info_bits()), seed * 1000 + static_cast<std::uint64_t>(b));
        const auto cw = code.encode(info);
        auto sym = map_bits(cw, Modulation::Qpsk);
        for (auto& s : sym) s += cplx(g(rng), g(rng));
        const std::vector<double> sinr(sym.size(), 1.0 / n0);
        const auto res = ldpc_decode(code, demap_llr(sym, Modulation::Qpsk, sinr));
        if (!res.parity_ok || res.info != info) ++errors;
    }
    return static_cast<double>(errors) / blocks;
}

}  // namespace

TEST_SUITE("fec") {

TEST_CASE("CRC-24A matches bit-serial division") {
    CHECK(crc24a(std::vector<std::uint8_t>(100, 0)) == 0U);
    CHECK(crc24a(std::vector<std::uint8_t>{1}) == 0x864CFBU);
    for (std::size_t len : {1U, 7U, 8U, 9U, 24U, 100U, 1001U}) {
        for (std::uint64_t s = 0; s < 20; ++s) {
            const auto bits = testutil::random_bits(len, s * 31 + len);
            CHECK(crc24a(bits) == crc_oracle(bits));
        }
    }
}

TEST_CASE("CRC attach and check") {
    const auto msg = testutil::random_bits(200, 5);
    const auto framed = crc_attach(msg);
    REQUIRE(framed.size() == 224);
    CHECK(std::equal(msg.begin(), msg.end(), framed.begin()));
    CHECK(crc_check(framed));
    CHECK(crc_oracle(framed) == 0U);
    CHECK_THROWS_AS(crc_check(std::vector<std::uint8_t>(10, 1)), InputError);
}

TEST_CASE("no CRC false pass in 10^6 corrupted blocks") {
    std::mt19937_64 rng(99);
    const auto msg = testutil::random_bits(96, 3);
    const auto framed = crc_attach(msg);
    std::uniform_int_distribution<int> pos(0, static_cast<int>(framed.size()) - 1);
    std::uniform_int_distribution<int> count(1, 12);
    int passes = 0;
    for (int t = 0; t < 1000000; ++t) {
        auto c = framed;
        const int flips = count(rng);
        for (int f = 0; f < flips; ++f) c[static_cast<std::size_t>(pos(rng))] ^= 1U;
        if (c != framed && crc_check(c)) ++passes;
    }
    CHECK(passes == 0);
}

TEST_CASE("code dimensions and rate") {
    for (int g : {1000, 1344, 4320, 12960, 60480, 120960}) {
        const auto code = QcLdpcCode::for_coded_bits(g);
        CHECK(code.coded_bits() == g);
        CHECK(code.lifting_size() == (g + 32) / 33);
        const double parity_fraction = static_cast<double>(code.coded_bits() - code.info_bits()) / code.coded_bits();
        CHECK(std::abs(parity_fraction - 1.0 / 3.0) <= 0.01);
    }
    CHECK_THROWS(QcLdpcCode::for_coded_bits(0));
}

TEST_CASE("encoder: zero word and parity checks on random blocks") {
    for (int g : {1000, 4320, 12960}) {
        const auto code = QcLdpcCode::for_coded_bits(g);
        const std::vector<std::uint8_t> zero(static_cast<std::size_t>(code.info_bits()), 0);
        const auto zc = code.encode(zero);
        CHECK(static_cast<int>(zc.size()) == g);
        CHECK(std::all_of(zc.begin(), zc.end(), [](auto b) { return b == 0; }));
        for (std::uint64_t s = 0; s < 100; ++s) {
            const auto info = testutil::random_bits(static_cast<std::size_t>(code.info_bits()), s + 1);
            const auto full = code.encode_full(info);
            CHECK(code.check(full));
            const auto tx = code.encode(info);
            for (int i = 0; i < g; i += 97) CHECK(tx[static_cast<std::size_t>(i)] == full[static_cast<std::size_t>(code.transmitted_position(i))]);
        }
        auto bad = code.encode_full(testutil::random_bits(static_cast<std::size_t>(code.info_bits()), 7));
        bad[static_cast<std::size_t>(code.lifting_size() * 3)] ^= 1U;
        CHECK_FALSE(code.check(bad));
        CHECK_THROWS_AS(code.encode(std::vector<std::uint8_t>(3, 0)), InputError);
    }
}

TEST_CASE("base matrix has no 4-cycles") {
    for (int g : {1000, 4320, 60480}) {
        const auto code = QcLdpcCode::for_coded_bits(g);
        const int z = code.lifting_size();
        const auto& e = code.entries();
        int cycles = 0;
        for (const auto& a : e) {
            for (const auto& b : e) {
                if (a.row >= b.row || a.col == b.col) continue;
                for (const auto& c : e) {
                    if (c.row != a.row || c.col != b.col) continue;
                    for (const auto& d : e) {
                        if (d.row != b.row || d.col != a.col) continue;
                        if (((a.shift - d.shift + b.shift - c.shift) % z + z) % z == 0) ++cycles;
                    }
                }
            }
        }
        CHECK(cycles == 0);
    }
}

TEST_CASE("noiseless and single-error decoding") {
    const auto code = QcLdpcCode::for_coded_bits(4320);
    const auto info = testutil::random_bits(static_cast<std::size_t>(code.info_bits()), 11);
    const auto cw = code.encode(info);
    const auto clean = ldpc_decode(code, to_llr(cw, 20.0f));
    CHECK(clean.parity_ok);
    CHECK(clean.info == info);
    CHECK(clean.iterations <= 1);

    for (int pos : {0, 100, 2000, 4319}) {
        auto llr = to_llr(cw, 20.0f);
        llr[static_cast<std::size_t>(pos)] = -llr[static_cast<std::size_t>(pos)];
        const auto res = ldpc_decode(code, llr);
        CHECK(res.parity_ok);
        CHECK(res.info == info);
    }
    CHECK_THROWS_AS(ldpc_decode(code, std::vector<float>(10, 1.0f)), InputError);
}

TEST_CASE("decoding is deterministic") {
    const auto code = QcLdpcCode::for_coded_bits(2000);
    std::mt19937_64 rng(4);
    std::normal_distribution<float> g(0.0f, 1.5f);
    const auto cw = code.encode(testutil::random_bits(static_cast<std::size_t>(code.info_bits()), 8));
    auto llr = to_llr(cw, 1.0f);
    for (auto& v : llr) v += g(rng);
    const auto a = ldpc_decode(code, llr);
    const auto b = ldpc_decode(code, llr);
    CHECK(a.info == b.info);
    CHECK(a.iterations == b.iterations);
    CHECK(a.parity_ok == b.parity_ok);
}

TEST_CASE("round trip through every modulation at infinite SNR") {
    for (auto mod : {Modulation::Qpsk, Modulation::Qam16, Modulation::Qam64, Modulation::Qam256}) {
        const int bps = bits_per_symbol(mod);
        const auto code = QcLdpcCode::for_coded_bits(120 * bps);
        int ok = 0;
        for (std::uint64_t s = 0; s < 1000; ++s) {
            const auto payload = testutil::random_bits(static_cast<std::size_t>(code.info_bits() - kCrcBits), s * 7 + 1);
            const auto info = crc_attach(payload);
            const auto sym = map_bits(code.encode(info), mod);
            const std::vector<double> sinr(sym.size(), 1e6);
            const auto res = ldpc_decode(code, demap_llr(sym, mod, sinr));
            if (res.parity_ok && crc_check(res.info) && res.info == info) ++ok;
        }
        CHECK(ok == 1000);
    }
}

TEST_CASE("QPSK AWGN waterfall lies within 1.5 dB of the capacity limit") {
    const auto code = QcLdpcCode::for_coded_bits(4320);
    const double limit = qpsk_capacity_snr_db(code.rate());
    // Coarse-to-fine search of the 10% BLER point with 200 blocks per probe.
    double lo = limit;
    double hi = limit + 3.0;
    for (int it = 0; it < 6; ++it) {
        const double mid = 0.5 * (lo + hi);
        (qpsk_bler(code, mid, 200, 1 + static_cast<std::uint64_t>(it)) > 0.1 ? lo : hi) = mid;
    }
    const double req = 0.5 * (lo + hi);
    INFO("capacity " << limit << " dB, 10% BLER at " << req << " dB");
    CHECK(req > limit);
    CHECK(req - limit <= 1.5);
    CHECK(qpsk_bler(code, limit - 0.5, 50, 77) == 1.0);
}

TEST_CASE("LLR signs and symmetry") {
    const std::vector<cplx> corner{cplx(1.0, 1.0) / std::sqrt(2.0)};
    const std::vector<double> high{100.0};
    const auto l = demap_llr(corner, Modulation::Qpsk, high);
    REQUIRE(l.size() == 2);
    CHECK(l[0] > 50.0f);
    CHECK(l[1] > 50.0f);

    // Every constellation point decoded from itself gives its own bits.
    for (auto mod : {Modulation::Qam16, Modulation::Qam64, Modulation::Qam256}) {
        const int bps = bits_per_symbol(mod);
        const auto pts = constellation(mod);
        const auto llr = demap_llr(pts, mod, std::vector<double>(pts.size(), 50.0));
        for (std::size_t i = 0; i < pts.size(); ++i) {
            std::vector<std::uint8_t> bits(static_cast<std::size_t>(bps));
            for (int b = 0; b < bps; ++b) bits[static_cast<std::size_t>(b)] = llr[i * bps + b] < 0.0f ? 1 : 0;
            CHECK(std::abs(map_bits(bits, mod)[0] - pts[i]) < 1e-12);
        }
    }

    // Midpoint of two Gray neighbours: the differing bit has zero LLR.
    for (auto mod : {Modulation::Qpsk, Modulation::Qam16, Modulation::Qam64}) {
        const int bps = bits_per_symbol(mod);
        std::vector<std::uint8_t> a(static_cast<std::size_t>(bps), 0);
        auto b = a;
        b[0] = 1;
        const cplx mid = 0.5 * (map_bits(a, mod)[0] + map_bits(b, mod)[0]);
        const auto ll = demap_llr(std::vector<cplx>{mid}, mod, std::vector<double>{10.0});
        CHECK(std::abs(ll[0]) < 1e-5f);
    }

    CHECK_THROWS_AS(demap_llr(corner, Modulation::Qpsk, std::vector<double>{0.0}), InputError);
    CHECK_THROWS_AS(demap_llr(corner, Modulation::Qpsk, std::vector<double>{}), InputError);
}

TEST_CASE("uncoded QPSK BER matches Q(sqrt(2 Eb/N0))") {
    for (double ebn0_db : {4.0, 5.0, 6.0, 7.0, 8.0}) {
        const double ebn0 = std::pow(10.0, ebn0_db / 10.0);
        const double esn0 = 2.0 * ebn0;
        const double expected = testutil::q_function(std::sqrt(2.0 * ebn0));
        const auto bits_needed = static_cast<std::size_t>(10000.0 / expected);
        std::mt19937_64 rng(static_cast<std::uint64_t>(ebn0_db * 10));
        std::normal_distribution<double> g(0.0, std::sqrt(0.5 / esn0));
        std::size_t errors = 0;
        std::size_t total = 0;
        const std::size_t chunk = 1 << 16;
        for (std::uint64_t c = 0; total < bits_needed; ++c) {
            const auto bits = testutil::random_bits(chunk, c + 1000 * static_cast<std::uint64_t>(ebn0_db));
            auto sym = map_bits(bits, Modulation::Qpsk);
            for (auto& s : sym) s += cplx(g(rng), g(rng));
            const auto llr = demap_llr(sym, Modulation::Qpsk, std::vector<double>(sym.size(), esn0));
            for (std::size_t i = 0; i < bits.size(); ++i) errors += (llr[i] < 0.0f) != (bits[i] == 1);
            total += bits.size();
        }
        const double ber = static_cast<double>(errors) / static_cast<double>(total);
        INFO("Eb/N0 " << ebn0_db << " dB: " << ber << " vs " << expected);
        CHECK(ber == doctest::Approx(expected).epsilon(0.05));
    }
}

}

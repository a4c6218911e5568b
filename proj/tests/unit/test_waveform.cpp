#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "helpers.hpp"
#include "subthz/dft.hpp"
#include "subthz/modulation.hpp"
#include "subthz/waveform.hpp"

using namespace subthz;
using testutil::max_abs_diff;

namespace {

ResourceGrid random_grid(const Numerology& num, Modulation mod, std::uint64_t seed) {
    ResourceGrid g(num.symbols_per_slot, num.active_subcarriers);
    const auto s = random_symbols(g.size(), mod, seed);
    std::copy(s.begin(), s.end(), g.data().begin());
    return g;
}

int hamming(int a, int b) { return __builtin_popcount(static_cast<unsigned>(a ^ b)); }

}  // namespace

TEST_SUITE("waveform") {

TEST_CASE("QPSK corner and Gray labelling") {
    const std::vector<std::uint8_t> zero{0, 0};
    const auto s = map_bits(zero, Modulation::Qpsk);
    CHECK(std::abs(s[0] - cplx(1.0, 1.0) / std::sqrt(2.0)) < 1e-15);
    CHECK_THROWS_AS(map_bits(std::vector<std::uint8_t>{0, 1, 1}, Modulation::Qpsk), InputError);
}

TEST_CASE("constellations have unit energy and Gray neighbours") {
    for (auto mod : {Modulation::Qpsk, Modulation::Qam16, Modulation::Qam64, Modulation::Qam256}) {
        const auto pts = constellation(mod);
        const int k = bits_per_symbol(mod);
        REQUIRE(pts.size() == (1U << k));
        double p = 0.0;
        std::set<std::pair<long, long>> distinct;
        for (const auto& x : pts) {
            p += std::norm(x);
            distinct.insert({std::lround(x.real() * 1e9), std::lround(x.imag() * 1e9)});
        }
        CHECK(p / static_cast<double>(pts.size()) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(distinct.size() == pts.size());
        // Nearest neighbours (minimum distance) differ in exactly one bit.
        double dmin = 1e9;
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j) dmin = std::min(dmin, std::abs(pts[i] - pts[j]));
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j)
                if (std::abs(pts[i] - pts[j]) < dmin * 1.0001)
                    CHECK(hamming(static_cast<int>(i), static_cast<int>(j)) == 1);
    }
}

TEST_CASE("64QAM Monte-Carlo mean power") {
    const auto bits = testutil::random_bits(100000 - 100000 % 6, 11);
    const auto s = map_bits(bits, Modulation::Qam64);
    CHECK(mean_power(s) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("unitary DFT matches a direct evaluation") {
    for (std::size_t n : {1U, 7U, 12U, 64U, 540U}) {
        const auto x = testutil::random_complex(n, n);
        const auto fx = dft(x);
        CHECK(max_abs_diff(fx, testutil::naive_dft(x, -1)) < 1e-9);
        CHECK(max_abs_diff(idft(fx), x) < 1e-12);
        // Parseval
        CHECK(testutil::energy(fx) == doctest::Approx(testutil::energy(x)).epsilon(1e-9));
    }
}

TEST_CASE("single subcarrier gives a constant-modulus tone") {
    const auto num = derive_numerology(960e3, 10);
    ResourceGrid g(num.symbols_per_slot, num.active_subcarriers);
    g(0, 17) = 1.0;
    const auto sig = ofdm_modulate(g, num);
    const double expect = 1.0 / std::sqrt(static_cast<double>(num.fft_size));
    for (int i = 0; i < num.samples_per_symbol(); ++i) {
        CHECK(std::abs(sig.samples[static_cast<std::size_t>(i)]) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("property: OFDM and SC-FDMA round trips for every SCS") {
    std::uint64_t seed = 100;
    for (int scs_khz : kSupportedScsKhz) {
        const double scs = scs_khz * 1e3;
        for (int prb : {1, 7, max_prbs(scs)}) {
            const auto num = derive_numerology(scs, prb);
            const auto g = random_grid(num, Modulation::Qam16, ++seed);
            const auto sig = ofdm_modulate(g, num);
            REQUIRE(sig.size() == static_cast<std::size_t>(num.samples_per_slot()));
            CHECK(max_abs_diff(ofdm_demodulate(sig, num).data(), g.data()) < 1e-9);
            CHECK(max_abs_diff(scfdma_demodulate(scfdma_modulate(g, num), num).data(), g.data()) < 1e-9);
            // Energy per symbol body equals the grid energy (unitary chain).
            const auto body = std::span<const cplx>(sig.samples).subspan(static_cast<std::size_t>(num.cp_samples),
                                                                         static_cast<std::size_t>(num.fft_size));
            CHECK(testutil::energy(body) == doctest::Approx(testutil::energy(g.symbol(0))).epsilon(1e-9));
        }
    }
}

TEST_CASE("oversampled modulation round trips") {
    const auto num = derive_numerology(480e3, 20);
    const auto g = random_grid(num, Modulation::Qpsk, 5);
    const auto sig = ofdm_modulate(g, num, 4);
    CHECK(sig.size() == static_cast<std::size_t>(4 * num.samples_per_slot()));
    CHECK(max_abs_diff(ofdm_demodulate(sig, num, 4).data(), g.data()) < 1e-9);
}

TEST_CASE("delay within the CP becomes a phase ramp") {
    const auto num = derive_numerology(960e3, 20);
    const auto g = random_grid(num, Modulation::Qpsk, 9);
    auto sig = ofdm_modulate(g, num);
    const int d = 5;
    TimeSignal delayed{CVector(sig.size()), sig.sample_rate_hz};
    for (std::size_t i = d; i < sig.size(); ++i) delayed.samples[i] = sig.samples[i - d];
    const auto rx = ofdm_demodulate(delayed, num);
    double err = 0.0;
    for (int s = 1; s < num.symbols_per_slot; ++s) {
        for (int k = 0; k < num.active_subcarriers; ++k) {
            const double a = -2.0 * std::numbers::pi * num.subcarrier_offset(k) * d / num.fft_size;
            err = std::max(err, std::abs(rx(s, k) - g(s, k) * std::polar(1.0, a)));
        }
    }
    CHECK(err < 1e-9);
}

TEST_CASE("constant sub-symbol stream spreads onto one subcarrier") {
    const auto num = derive_numerology(960e3, 4);
    ResourceGrid sub(1, num.active_subcarriers);
    for (auto& v : sub.data()) v = cplx(0.6, -0.8);
    const auto spread = dft_spread(sub);
    CHECK(std::abs(spread(0, 0)) == doctest::Approx(std::sqrt(static_cast<double>(num.active_subcarriers))));
    for (int k = 1; k < num.active_subcarriers; ++k) CHECK(std::abs(spread(0, k)) < 1e-12);
}

TEST_CASE("sub-symbol assembly around pilot positions") {
    const auto num = derive_numerology(3840e3, 2);
    const int m = num.active_subcarriers;
    SubsymbolPilots pilots{{0, 5, m - 1}, ResourceGrid(num.symbols_per_slot, 3)};
    for (auto& v : pilots.values.data()) v = cplx(-1.0, 0.0);
    const std::size_t data_count = static_cast<std::size_t>(num.symbols_per_slot) * static_cast<std::size_t>(m - 3);
    const auto data = random_symbols(data_count, Modulation::Qpsk, 3);
    const auto grid = assemble_subsymbols(data, pilots, num);
    CHECK(grid(0, 0) == cplx(-1.0, 0.0));
    CHECK(grid(3, 5) == cplx(-1.0, 0.0));
    CHECK(grid(0, 1) == data[0]);
    CHECK(grid(1, 1) == data[static_cast<std::size_t>(m - 3)]);
    const auto rx = scfdma_demodulate(scfdma_modulate(data, pilots, num), num);
    CHECK(max_abs_diff(rx.data(), grid.data()) < 1e-9);

    SubsymbolPilots bad{{m}, ResourceGrid(num.symbols_per_slot, 1)};
    CHECK_THROWS_AS(assemble_subsymbols(data, bad, num), ConfigError);
    CHECK_THROWS_AS(assemble_subsymbols(std::span<const cplx>(data).first(3), pilots, num), InputError);
}

TEST_CASE("single-subcarrier SC-FDMA has a flat envelope") {
    Numerology num = derive_numerology(960e3, 1);
    num.active_subcarriers = 1;
    num.prb_count = 0;
    ResourceGrid g(num.symbols_per_slot, 1);
    const auto s = random_symbols(g.size(), Modulation::Qpsk, 4);
    std::copy(s.begin(), s.end(), g.data().begin());
    const auto sig = scfdma_modulate(g, num);
    CHECK(papr_ccdf(TimeSignal{sig.samples, sig.sample_rate_hz}, 0.1) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("PAPR of constant envelope and CCDF monotonicity") {
    TimeSignal tone{CVector(4096), 1.0};
    for (std::size_t i = 0; i < tone.size(); ++i) tone.samples[i] = std::polar(1.0, 0.01 * static_cast<double>(i));
    CHECK(std::abs(papr_ccdf(tone, 1e-2)) < 1e-9);
    CHECK_THROWS_AS(papr_ccdf(tone, 1e-4), EstimationError);

    const auto num = derive_numerology(960e3, 180);
    const auto sig = ofdm_modulate(random_grid(num, Modulation::Qpsk, 1), num);
    std::vector<double> levels;
    for (int i = 0; i <= 48; ++i) levels.push_back(0.25 * i);
    const auto ccdf = power_ccdf(sig, levels);
    for (std::size_t i = 1; i < ccdf.size(); ++i) CHECK(ccdf[i] <= ccdf[i - 1]);
}

TEST_CASE("sample-level PAPR at 1e-3: SC-FDMA at least 2.5 dB below OFDM") {
    const auto num = derive_numerology(960e3, 180);
    TimeSignal ofdm{{}, num.sample_rate_hz};
    TimeSignal sc{{}, num.sample_rate_hz};
    for (int slot = 0; slot < 4; ++slot) {
        const auto g = random_grid(num, Modulation::Qpsk, 1000 + static_cast<std::uint64_t>(slot));
        const auto a = ofdm_modulate(g, num, 4);
        const auto b = scfdma_modulate(g, num, 4);
        ofdm.samples.insert(ofdm.samples.end(), a.samples.begin(), a.samples.end());
        sc.samples.insert(sc.samples.end(), b.samples.begin(), b.samples.end());
    }
    const double p_ofdm = papr_ccdf(ofdm, 1e-3);
    const double p_sc = papr_ccdf(sc, 1e-3);
    MESSAGE("sample PAPR(1e-3): OFDM " << p_ofdm << " dB, SC-FDMA " << p_sc << " dB");
    CHECK(p_ofdm > p_sc);
    CHECK(p_ofdm - p_sc >= 2.5);
}

TEST_CASE("per-symbol PAPR of 180 PRB QPSK OFDM at 1e-3 is 11-12 dB") {
    const auto num = derive_numerology(960e3, 180);
    const auto sym_len = static_cast<std::size_t>(num.samples_per_symbol());
    const auto cp = static_cast<std::size_t>(num.cp_samples);
    const auto nfft = static_cast<std::size_t>(num.fft_size);
    // Oracle: peak over mean of every symbol body, 10080 symbols.
    std::vector<double> ofdm_papr;
    std::vector<double> sc_papr;
    TimeSignal first_slots{{}, num.sample_rate_hz};
    for (int slot = 0; slot < 720; ++slot) {
        const auto g = random_grid(num, Modulation::Qpsk, 5000 + static_cast<std::uint64_t>(slot));
        const auto a = ofdm_modulate(g, num);
        const auto b = scfdma_modulate(g, num);
        for (int s = 0; s < num.symbols_per_slot; ++s) {
            for (auto* pair : {&a, &b}) {
                const auto body = std::span<const cplx>(pair->samples).subspan(static_cast<std::size_t>(s) * sym_len + cp, nfft);
                double peak = 0.0;
                for (const auto& v : body) peak = std::max(peak, std::norm(v));
                (pair == &a ? ofdm_papr : sc_papr).push_back(10.0 * std::log10(peak / mean_power(body)));
            }
        }
        if (slot < 72) first_slots.samples.insert(first_slots.samples.end(), a.samples.begin(), a.samples.end());
    }
    auto level = [](std::vector<double> v, double p) {
        std::sort(v.begin(), v.end(), std::greater<>());
        return v[static_cast<std::size_t>(std::floor(p * static_cast<double>(v.size())))];
    };
    const double lo = level(ofdm_papr, 1e-3);
    const double ls = level(sc_papr, 1e-3);
    MESSAGE("per-symbol PAPR(1e-3): OFDM " << lo << " dB, SC-FDMA " << ls << " dB");
    CHECK(lo >= 11.0);
    CHECK(lo <= 12.0);
    CHECK(lo > ls);

    // The library quantile agrees with the oracle on the same symbols.
    std::vector<double> first(ofdm_papr.begin(), ofdm_papr.begin() + 72 * num.symbols_per_slot);
    CHECK(symbol_papr_ccdf(first_slots, num, 1e-2) == doctest::Approx(level(first, 1e-2)).epsilon(1e-9));
}

}  // TEST_SUITE

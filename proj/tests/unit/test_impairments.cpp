#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "subthz/awgn.hpp"
#include "subthz/backoff.hpp"
#include "subthz/dft.hpp"
#include "subthz/modulation.hpp"
#include "subthz/numerology.hpp"
#include "subthz/phase_noise.hpp"
#include "subthz/power_amplifier.hpp"
#include "subthz/spectrum.hpp"
#include "subthz/waveform.hpp"

using namespace subthz;

namespace {

// Closed-form pole/zero PSD in dBc/Hz, written out independently of the library.
double psd_oracle(const PnModel& m, double f, double fc) {
    double db = m.psd0_dbc_hz + 20.0 * std::log10(fc / m.ref_carrier_hz);
    for (const auto& z : m.zeros) db += 10.0 * std::log10(1.0 + std::pow(f / z.corner_hz, z.slope));
    for (const auto& p : m.poles) db -= 10.0 * std::log10(1.0 + std::pow(f / p.corner_hz, p.slope));
    return db;
}

ResourceGrid random_grid(int symbols, int subcarriers, Modulation mod, std::uint64_t seed) {
    ResourceGrid g(symbols, subcarriers);
    const auto s = random_symbols(g.size(), mod, seed);
    std::copy(s.begin(), s.end(), g.data().begin());
    return g;
}

// Magnitude of the Dirichlet kernel sum_{m<N} e^{j x m} / N.
double dirichlet(double x, int n) {
    const double den = n * std::sin(x / 2.0);
    if (std::abs(den) < 1e-15) return 1.0;
    return std::abs(std::sin(n * x / 2.0) / den);
}

// Expected in-channel over worse adjacent-channel power of CP-OFDM with
// independent unit-power data: each subcarrier contributes a Dirichlet-shaped
// spectrum of the CP-extended symbol length. The channel is centred on the
// allocation; integration runs on a grid 8x finer than the sinc main lobe.
double ofdm_aclr_oracle(const Numerology& num, int os) {
    const double nos = static_cast<double>(num.fft_size) * os;
    const double len = static_cast<double>(num.samples_per_symbol()) * os;
    const double bw = num.active_subcarriers / nos;
    const double centre = 0.5 * (num.subcarrier_offset(0) + num.subcarrier_offset(num.active_subcarriers - 1)) / nos;
    const double step = 1.0 / (8.0 * len);
    auto band = [&](double a, double b) {
        double acc = 0.0;
        for (double nu = centre + a; nu < centre + b; nu += step) {
            double p = 0.0;
            for (int k = 0; k < num.active_subcarriers; ++k) {
                const double d = nu - num.subcarrier_offset(k) / nos;
                const double sd = std::sin(std::numbers::pi * d);
                const double sl = std::sin(std::numbers::pi * d * len);
                p += std::abs(sd) < 1e-15 ? len * len : sl * sl / (sd * sd);
            }
            acc += p;
        }
        return acc;
    };
    const double adjacent = std::max(band(bw / 2.0, 1.5 * bw), band(-1.5 * bw, -bw / 2.0));
    return 10.0 * std::log10(band(-bw / 2.0, bw / 2.0) / adjacent);
}

BackoffSettings backoff_settings() {
    BackoffSettings s;
    s.numerology = derive_numerology(960e3, 180);
    return s;
}

}  // namespace

TEST_SUITE("impairments") {

TEST_CASE("PN PSD carrier scaling") {
    for (const auto& m : {bs_pn_model(), ue_pn_model()}) {
        for (double f : {1e3, 1e5, 1e6, 1e7, 1e8}) {
            const double ref = pn_psd(m, f, m.ref_carrier_hz);
            CHECK(ref == doctest::Approx(psd_oracle(m, f, m.ref_carrier_hz)).epsilon(1e-12));
            CHECK(pn_psd(m, f, 2.0 * m.ref_carrier_hz) - ref == doctest::Approx(6.0206).epsilon(1e-4));
            CHECK(pn_psd(m, f, 90e9) - pn_psd(m, f, 28e9) == doctest::Approx(10.1412).epsilon(1e-4));
        }
    }
}

TEST_CASE("PN PSD rejects non-positive offsets") {
    CHECK_THROWS_AS(pn_psd(bs_pn_model(), 0.0, 90e9), DomainError);
    CHECK_THROWS_AS(pn_psd(ue_pn_model(), -1.0, 90e9), DomainError);
}

TEST_CASE("UE oscillator is noisier than BS") {
    for (double f : {1e4, 1e5, 1e6}) {
        CHECK(pn_psd(ue_pn_model(), f, 90e9) > pn_psd(bs_pn_model(), f, 90e9));
    }
}

TEST_CASE("ideal PN model produces zero phase") {
    const auto p = generate_pn(ideal_pn_model(), 90e9, 1e9, 1000, 3);
    REQUIRE(p.size() == 1000);
    CHECK(std::all_of(p.begin(), p.end(), [](double v) { return v == 0.0; }));
}

TEST_CASE("PN synthesis is deterministic per seed") {
    const auto a = generate_pn(ue_pn_model(), 90e9, 1e9, 4096, 11);
    const auto b = generate_pn(ue_pn_model(), 90e9, 1e9, 4096, 11);
    const auto c = generate_pn(ue_pn_model(), 90e9, 1e9, 4096, 12);
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("averaged PN periodogram follows the model within 1 dB") {
    // Hann-windowed full-length periodogram, averaged over realizations and
    // compared in 1/10-decade bands from 10 bins up to fs/4.
    const double fs = derive_numerology(960e3, 180).sample_rate_hz;
    const double fc = 90e9;
    const std::size_t n = 1U << 15;
    const int realizations = 100;
    std::vector<double> w(n);
    double wpow = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
        wpow += w[i] * w[i];
    }
    for (const auto& model : {bs_pn_model(), ue_pn_model()}) {
        const PnSynthesizer synth(model, fc, fs, n);
        std::vector<double> acc(n / 2 + 1, 0.0);
        CVector buf(n);
        CVector spec(n);
        for (int r = 0; r < realizations; ++r) {
            const auto phase = synth(1000 + static_cast<std::uint64_t>(r));
            for (std::size_t i = 0; i < n; ++i) buf[i] = phase[i] * w[i];
            dft_unscaled(buf, spec);
            for (std::size_t k = 0; k <= n / 2; ++k) acc[k] += std::norm(spec[k]) / (wpow * fs);
        }
        const double df = fs / static_cast<double>(n);
        const double lo = 10.0 * df;
        const double hi = fs / 4.0;
        double worst = 0.0;
        int bands = 0;
        for (double b0 = lo; b0 < hi; b0 *= std::pow(10.0, 0.1)) {
            const double b1 = std::min(hi, b0 * std::pow(10.0, 0.1));
            double meas = 0.0;
            double ref = 0.0;
            int count = 0;
            for (auto k = static_cast<std::size_t>(std::ceil(b0 / df)); k * df < b1; ++k) {
                meas += acc[k] / realizations;
                ref += std::pow(10.0, psd_oracle(model, k * df, fc) / 10.0);
                ++count;
            }
            if (count == 0) continue;
            worst = std::max(worst, std::abs(10.0 * std::log10(meas / ref)));
            ++bands;
        }
        INFO(model.name << " worst band deviation " << worst << " dB over " << bands << " bands");
        CHECK(bands > 20);
        CHECK(worst < 1.0);
    }
}

TEST_CASE("apply_pn preserves magnitude and zero phase is identity") {
    const auto x = testutil::random_complex(512, 5);
    const TimeSignal sig{x, 1e6};
    const auto phase = generate_pn(ue_pn_model(), 90e9, 1e9, 512, 4);
    const auto y = apply_pn(sig, phase);
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(std::abs(y.samples[i]) == doctest::Approx(std::abs(x[i])).epsilon(1e-12));
    }
    const std::vector<double> zero(512, 0.0);
    CHECK(apply_pn(sig, zero).samples == x);
    CHECK_THROWS_AS(apply_pn(sig, std::vector<double>(10, 0.0)), InputError);
}

TEST_CASE("constant phase on a symbol is a pure rotation") {
    const auto num = derive_numerology(960e3, 4);
    const auto grid = random_grid(num.symbols_per_slot, num.active_subcarriers, Modulation::Qam16, 9);
    const auto sig = ofdm_modulate(grid, num);
    const double theta = 0.7;
    const std::vector<double> phase(sig.size(), theta);
    const auto rx = ofdm_demodulate(apply_pn(sig, phase), num);
    const cplx rot = std::polar(1.0, theta);
    double err = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) err = std::max(err, std::abs(rx.data()[i] - rot * grid.data()[i]));
    CHECK(err < 1e-12);
}

TEST_CASE("linear phase ramp leaks into neighbours as a Dirichlet kernel") {
    const auto num = derive_numerology(960e3, 4);
    const int n = num.fft_size;
    const int k0 = 20;
    ResourceGrid grid(num.symbols_per_slot, num.active_subcarriers);
    grid(0, k0) = 1.0;
    const auto sig = ofdm_modulate(grid, num);
    const double alpha = 2.0 * std::numbers::pi * 0.2 / n;
    std::vector<double> phase(sig.size());
    for (std::size_t i = 0; i < phase.size(); ++i) phase[i] = alpha * static_cast<double>(i);
    const auto rx = ofdm_demodulate(apply_pn(sig, phase), num);
    for (int k = 0; k < num.active_subcarriers; ++k) {
        const double x = alpha + 2.0 * std::numbers::pi * (k0 - k) / n;
        CHECK(std::abs(std::abs(rx(0, k)) - dirichlet(x, n)) < 1e-9);
    }
    // Most energy stays on the tone, and ICI is visible on the neighbours.
    CHECK(std::abs(rx(0, k0)) < 1.0);
    CHECK(std::abs(rx(0, k0 + 1)) > 0.05);
}

TEST_CASE("ideal PA is a bit-exact passthrough") {
    const TimeSignal sig{testutil::random_complex(1024, 2), 1e6};
    CHECK(apply_pa(sig, PaModel::ideal()).samples == sig.samples);
    CHECK_THROWS_AS(apply_pa(sig, PaModel::rapp(2.0, -1.0)), DomainError);
}

TEST_CASE("Rapp AM/AM is monotone and saturates") {
    for (double p : {1.0, 2.0, 3.0, std::numeric_limits<double>::infinity()}) {
        double prev = 0.0;
        for (double a = 0.01; a < 5.0; a += 0.01) {
            const double y = rapp_amplitude(a, p, 1.0);
            CHECK(y >= prev);
            CHECK(y <= 1.0 + 1e-12);
            CHECK(y <= a + 1e-12);
            prev = y;
        }
    }
    CHECK(rapp_amplitude(1.0, 2.0, 1.0) == doctest::Approx(std::pow(2.0, -0.25)));
}

TEST_CASE("constant-envelope input sees only a gain change") {
    const int n = 4096;
    CVector x(n);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
    for (auto& v : x) v = std::polar(1.0, u(rng));
    const TimeSignal sig{x, 1e6};
    for (const auto& pa : {PaModel::rapp(2.0, 0.0), PaModel::hard_clip(0.0), PaModel::rapp(3.0, 3.0)}) {
        const auto y = apply_pa(sig, pa);
        const cplx g = y.samples[0] / x[0];
        double dev = 0.0;
        for (int i = 0; i < n; ++i) dev = std::max(dev, std::abs(y.samples[i] - g * x[i]));
        CHECK(dev < 1e-12);
    }
}

TEST_CASE("large back-off makes the PA transparent") {
    BackoffProbe probe(WaveformKind::Ofdm, Modulation::Qam64, backoff_settings());
    const auto m = probe.evaluate(PaModel::rapp(2.0, 40.0));
    CHECK(m.evm_percent < 0.1);
    CHECK(m.aclr_db == doctest::Approx(probe.evaluate(PaModel::ideal()).aclr_db).epsilon(0.01));
}

TEST_CASE("unclipped OFDM ACLR matches the analytic leakage of rectangular symbols") {
    const auto s = backoff_settings();
    const double oracle = ofdm_aclr_oracle(s.numerology, s.oversampling);
    const BackoffProbe probe(WaveformKind::Ofdm, Modulation::Qpsk, s);
    const double measured = probe.evaluate(PaModel::ideal()).aclr_db;
    INFO("measured " << measured << " dB, analytic " << oracle << " dB");
    CHECK(std::abs(measured - oracle) < 0.5);
    CHECK(measured > 30.0);
}

TEST_CASE("ACLR: clean signal high, hard clipping low, monotone in back-off") {
    BackoffProbe probe(WaveformKind::Ofdm, Modulation::Qpsk, backoff_settings());
    CHECK(probe.evaluate(PaModel::ideal()).aclr_db > 30.0);
    CHECK(probe.evaluate(PaModel::hard_clip(0.0)).aclr_db < 20.0);
    double prev = -1e9;
    for (double bo = 0.0; bo <= 12.0; bo += 1.0) {
        const double aclr = probe.evaluate(PaModel::rapp(2.0, bo)).aclr_db;
        CHECK(aclr >= prev - 0.05);
        prev = aclr;
    }
    const TimeSignal short_sig{CVector(4096, cplx(1.0, 0.0)), 1e9};
    CHECK_THROWS_AS(measure_aclr(short_sig, 0.5e9), EstimationError);
}

TEST_CASE("EVM of identical, scaled and noisy grids") {
    const auto ref = random_grid(14, 600, Modulation::Qam16, 21);
    CHECK(measure_evm(ref, ref) < 1e-12);
    ResourceGrid scaled = ref;
    for (auto& v : scaled.data()) v *= cplx(0.9, 0.2);
    CHECK(measure_evm(ref, scaled) < 1e-10);
    ResourceGrid noisy = ref;
    const auto noise = testutil::random_complex(ref.size(), 22, 0.1);
    for (std::size_t i = 0; i < ref.size(); ++i) noisy.data()[i] += noise[i];
    CHECK(measure_evm(ref, noisy) == doctest::Approx(10.0).epsilon(0.05));
    CHECK_THROWS_AS(measure_evm(ref, ResourceGrid(14, 10)), InputError);
}

TEST_CASE("required back-off properties") {
    const auto s = backoff_settings();
    CHECK(required_backoff(WaveformKind::Ofdm, Modulation::Qam256, PaModel::ideal(), s) == 0.0);
    const auto pa = PaModel::rapp(2.0);
    const double qpsk = required_backoff(WaveformKind::Ofdm, Modulation::Qpsk, pa, s);
    const double q256 = required_backoff(WaveformKind::Ofdm, Modulation::Qam256, pa, s);
    CHECK(q256 >= qpsk);
    double prev = 1e9;
    for (double aclr : {30.0, 25.0, 20.0, 15.0}) {
        BackoffSettings t = s;
        t.aclr_min_db = aclr;
        const double bo = required_backoff(WaveformKind::ScFdma, Modulation::Qpsk, pa, t);
        CHECK(bo <= prev);
        prev = bo;
    }
    BackoffSettings impossible = s;
    impossible.aclr_min_db = 200.0;
    impossible.max_backoff_db = 2.0;
    CHECK_THROWS_AS(required_backoff(WaveformKind::Ofdm, Modulation::Qpsk, pa, impossible), AnalysisError);
}

TEST_CASE("AWGN: post-FFT SNR, infinite SNR and determinism") {
    const auto num = derive_numerology(960e3, 180);
    const ResourceGrid empty(num.symbols_per_slot, num.active_subcarriers);
    const auto sig = ofdm_modulate(empty, num);
    for (double snr : {0.0, 10.0, 20.0}) {
        const auto rx = ofdm_demodulate(apply_awgn(sig, snr, 77), num);
        const double var = testutil::energy(rx.data()) / static_cast<double>(rx.size());
        CHECK(std::abs(10.0 * std::log10(var) + snr) < 0.1);
    }
    const auto grid = random_grid(num.symbols_per_slot, num.active_subcarriers, Modulation::Qpsk, 3);
    const auto tx = ofdm_modulate(grid, num);
    CHECK(apply_awgn(tx, std::numeric_limits<double>::infinity(), 1).samples == tx.samples);
    CHECK(apply_awgn(tx, 5.0, 1).samples == apply_awgn(tx, 5.0, 1).samples);
    CHECK(apply_awgn(tx, 5.0, 1).samples != apply_awgn(tx, 5.0, 2).samples);
}

}

#include "subthz/channel.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <random>

namespace subthz {

namespace {

// TDL-E normalised delays and powers (dB). The first entry is the diffuse
// part of the first cluster; the LOS ray shares its zero delay.
struct NormalisedTap {
    double delay;
    double power_db;
};

constexpr std::array<NormalisedTap, 14> kTdlE{{
    {0.0000, -22.03},
    {0.5133, -15.8},
    {0.5440, -18.1},
    {0.5630, -19.8},
    {0.5440, -22.9},
    {0.7112, -22.4},
    {1.9092, -18.6},
    {1.9293, -20.8},
    {1.9589, -22.6},
    {2.6426, -22.3},
    {3.7136, -25.6},
    {5.4524, -20.2},
    {12.0034, -29.8},
    {20.6519, -29.2},
}};

constexpr int kSinusoids = 32;

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace

double rms_delay_spread(const std::vector<ChannelTap>& taps) {
    double p = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
    for (const auto& t : taps) {
        p += t.power;
        m1 += t.power * t.delay_s;
        m2 += t.power * t.delay_s * t.delay_s;
    }
    if (p <= 0.0) {
        return 0.0;
    }
    const double mean = m1 / p;
    return std::sqrt(std::max(m2 / p - mean * mean, 0.0));
}

Mat2 los_matrix(double xpr_db) {
    const double leak = std::isinf(xpr_db) ? 0.0 : db_to_linear(-xpr_db);
    const double a = std::sqrt(2.0 / (1.0 + leak));
    const double b = std::sqrt(2.0 * leak / (1.0 + leak));
    Mat2 m;
    m << a, b, -b, a;
    return m;
}

ChannelProfile cdl_e_profile(double rms_delay_spread_s, double rician_k_db, double ue_speed_mps,
                             double carrier_hz, double xpr_db) {
    ChannelProfile prof;
    prof.name = "cdl-e";
    prof.rician_k_db = rician_k_db;
    prof.rms_delay_spread_s = rms_delay_spread_s;
    prof.ue_speed_mps = ue_speed_mps;
    prof.carrier_hz = carrier_hz;
    prof.xpr_db = xpr_db;
    prof.fading = true;

    const bool los_only = std::isinf(rician_k_db) && rician_k_db > 0.0;
    const double k = los_only ? 0.0 : db_to_linear(rician_k_db);
    const double diffuse_total = los_only ? 0.0 : 1.0 / (k + 1.0);
    prof.los_power = 1.0 - diffuse_total;

    double nlos_sum = 0.0;
    for (const auto& t : kTdlE) {
        nlos_sum += db_to_linear(t.power_db);
    }
    for (const auto& t : kTdlE) {
        prof.taps.push_back({t.delay, diffuse_total * db_to_linear(t.power_db) / nlos_sum});
    }
    prof.taps.front().power += prof.los_power;

    const double ds_norm = rms_delay_spread(prof.taps);
    const double scale = ds_norm > 0.0 ? rms_delay_spread_s / ds_norm : 0.0;
    for (auto& t : prof.taps) {
        t.delay_s *= scale;
    }
    return prof;
}

ChannelProfile awgn_profile() {
    ChannelProfile prof;
    prof.name = "awgn";
    prof.taps = {{0.0, 1.0}};
    prof.los_power = 1.0;
    prof.rician_k_db = std::numeric_limits<double>::infinity();
    prof.rms_delay_spread_s = 0.0;
    prof.ue_speed_mps = 0.0;
    prof.xpr_db = std::numeric_limits<double>::infinity();
    prof.fading = false;
    return prof;
}

MimoChannelRealization::MimoChannelRealization(std::vector<double> delays_s, int symbols)
    : delays_s_(std::move(delays_s)), symbols_(symbols),
      gains_(delays_s_.size() * static_cast<std::size_t>(symbols), Mat2::Zero()) {}

MimoChannelRealization realize_channel(const ChannelProfile& profile, double duration_s,
                                       double symbol_period_s, std::uint64_t seed) {
    if (!(symbol_period_s > 0.0) || !(duration_s > 0.0)) {
        throw InputError("realize_channel: duration and symbol period must be positive");
    }
    const int symbols = static_cast<int>(std::ceil(duration_s / symbol_period_s - 1e-9));
    std::vector<double> delays;
    for (const auto& t : profile.taps) {
        delays.push_back(t.delay_s);
    }
    MimoChannelRealization real(delays, symbols);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 2.0 * std::numbers::pi);
    const double fd = profile.max_doppler_hz();
    const Mat2 los = los_matrix(profile.xpr_db);

    // Sum-of-sinusoids state for every (tap, rx, tx) diffuse process.
    struct Sos {
        std::array<double, kSinusoids> freq;
        std::array<double, kSinusoids> phase;
    };
    std::vector<Sos> sos;
    if (profile.fading) {
        sos.resize(profile.taps.size() * 4);
        for (auto& s : sos) {
            for (int n = 0; n < kSinusoids; ++n) {
                s.freq[static_cast<std::size_t>(n)] = fd * std::cos(uni(rng));
                s.phase[static_cast<std::size_t>(n)] = uni(rng);
            }
        }
    }
    const double norm = 1.0 / std::sqrt(static_cast<double>(kSinusoids));
    for (int sym = 0; sym < symbols; ++sym) {
        const double t = (sym + 0.5) * symbol_period_s;
        for (std::size_t tap = 0; tap < profile.taps.size(); ++tap) {
            Mat2 g = Mat2::Zero();
            double diffuse = profile.taps[tap].power;
            if (tap == 0) {
                diffuse -= profile.los_power;
                g += std::sqrt(profile.los_power) * los;
            }
            if (profile.fading && diffuse > 0.0) {
                const double amp = std::sqrt(diffuse) * norm;
                for (int e = 0; e < 4; ++e) {
                    const auto& s = sos[tap * 4 + static_cast<std::size_t>(e)];
                    cplx acc{};
                    for (int n = 0; n < kSinusoids; ++n) {
                        acc += std::polar(1.0, 2.0 * std::numbers::pi * s.freq[static_cast<std::size_t>(n)] * t +
                                                   s.phase[static_cast<std::size_t>(n)]);
                    }
                    g(e / 2, e % 2) += amp * acc;
                }
            }
            real.gain(sym, static_cast<int>(tap)) = g;
        }
    }
    return real;
}

namespace {

struct MergedTap {
    int delay;
    Mat2 gain;
};

// Taps of one symbol after rounding delays to samples and merging coincident ones.
std::vector<MergedTap> merged_taps(const MimoChannelRealization& ch, int symbol, double fs) {
    std::map<int, Mat2> by_delay;
    for (int t = 0; t < ch.taps(); ++t) {
        const int d = static_cast<int>(std::lround(ch.delays_s()[static_cast<std::size_t>(t)] * fs));
        auto [it, inserted] = by_delay.try_emplace(d, Mat2::Zero());
        it->second += ch.gain(symbol, t);
    }
    std::vector<MergedTap> out;
    for (const auto& [d, g] : by_delay) {
        out.push_back({d, g});
    }
    return out;
}

}  // namespace

ChannelOutput apply_channel(const PortSignals& tx, const MimoChannelRealization& channel,
                            const Numerology& num) {
    const std::size_t n = tx[0].samples.size();
    if (tx[1].samples.size() != n) {
        throw InputError("apply_channel: port lengths differ");
    }
    const auto sym_len = static_cast<std::size_t>(num.samples_per_symbol());
    const auto symbols = static_cast<int>((n + sym_len - 1) / sym_len);
    if (symbols > channel.symbols()) {
        throw InputError("apply_channel: realization shorter than the signal");
    }
    ChannelOutput out;
    for (auto& p : out.ports) {
        p.samples.assign(n, cplx{});
        p.sample_rate_hz = tx[0].sample_rate_hz;
    }
    for (int s = 0; s < symbols; ++s) {
        const auto taps = merged_taps(channel, s, num.sample_rate_hz);
        const std::size_t begin = static_cast<std::size_t>(s) * sym_len;
        const std::size_t end = std::min(n, begin + sym_len);
        for (const auto& tap : taps) {
            if (tap.delay >= num.cp_samples && tap.gain.norm() > 0.0) {
                out.delay_exceeds_cp = true;
            }
            const auto d = static_cast<std::size_t>(tap.delay);
            const std::size_t first = std::max(begin, d);
            for (int r = 0; r < 2; ++r) {
                auto* y = out.ports[static_cast<std::size_t>(r)].samples.data();
                for (int c = 0; c < 2; ++c) {
                    const cplx g = tap.gain(r, c);
                    if (g == cplx{}) {
                        continue;
                    }
                    const auto* x = tx[static_cast<std::size_t>(c)].samples.data();
                    for (std::size_t i = first; i < end; ++i) {
                        y[i] += g * x[i - d];
                    }
                }
            }
        }
    }
    return out;
}

std::vector<Mat2, Eigen::aligned_allocator<Mat2>> channel_frequency_response(
    const MimoChannelRealization& channel, const Numerology& num) {
    const int k_count = num.active_subcarriers;
    std::vector<Mat2, Eigen::aligned_allocator<Mat2>> h(
        static_cast<std::size_t>(num.symbols_per_slot) * static_cast<std::size_t>(k_count));
    for (int s = 0; s < num.symbols_per_slot; ++s) {
        const auto taps = merged_taps(channel, s, num.sample_rate_hz);
        for (int k = 0; k < k_count; ++k) {
            Mat2 acc = Mat2::Zero();
            const double off = num.subcarrier_offset(k);
            for (const auto& tap : taps) {
                acc += std::polar(1.0, -2.0 * std::numbers::pi * off * tap.delay / num.fft_size) * tap.gain;
            }
            h[static_cast<std::size_t>(s) * static_cast<std::size_t>(k_count) + static_cast<std::size_t>(k)] = acc;
        }
    }
    return h;
}

}  // namespace subthz

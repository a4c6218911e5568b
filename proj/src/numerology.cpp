#include "subthz/numerology.hpp"

#include <cmath>
#include <string>

#include "subthz/errors.hpp"

namespace subthz {

namespace {

constexpr int kCpNumerator = 144;
constexpr int kCpDenominator = 2048;
constexpr int kPrbCap = 180;

}  // namespace

bool is_supported_scs(double scs_hz) {
    for (int khz : kSupportedScsKhz) {
        if (scs_hz == khz * 1e3) {
            return true;
        }
    }
    return false;
}

int max_prbs(double scs_hz) {
    if (!is_supported_scs(scs_hz)) {
        throw ConfigError("unsupported subcarrier spacing " + std::to_string(scs_hz / 1e3) + " kHz");
    }
    // 180 PRB at 960 kHz spans 2.07 GHz; wider spacings keep that bandwidth.
    if (scs_hz <= 960e3) {
        return kPrbCap;
    }
    return static_cast<int>(kPrbCap * 960e3 / scs_hz);
}

Numerology derive_numerology(double scs_hz, int prb_count) {
    const int limit = max_prbs(scs_hz);
    if (prb_count < 1 || prb_count > limit) {
        throw ConfigError("prb_count " + std::to_string(prb_count) + " outside [1, " +
                          std::to_string(limit) + "] for " + std::to_string(scs_hz / 1e3) +
                          " kHz");
    }
    Numerology num;
    num.scs_hz = scs_hz;
    num.prb_count = prb_count;
    num.active_subcarriers = prb_count * kSubcarriersPerPrb;
    const double min_fft = num.active_subcarriers / kMaxFftOccupancy;
    int fft = 1;
    while (fft < min_fft) {
        fft *= 2;
    }
    num.fft_size = fft;
    num.cp_samples = static_cast<int>(
        std::lround(static_cast<double>(fft) * kCpNumerator / kCpDenominator));
    num.sample_rate_hz = scs_hz * fft;
    return num;
}

}  // namespace subthz

#include "subthz/awgn.hpp"

#include <cmath>
#include <random>

namespace subthz {

double noise_variance_for_snr(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

TimeSignal apply_awgn(const TimeSignal& sig, double snr_db, std::uint64_t seed) {
    if (std::isinf(snr_db) && snr_db > 0.0) {
        return sig;
    }
    const double sigma = std::sqrt(noise_variance_for_snr(snr_db) / 2.0);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, sigma);
    TimeSignal out = sig;
    for (auto& v : out.samples) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        v += cplx(re, im);
    }
    return out;
}

}  // namespace subthz

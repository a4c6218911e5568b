#include "subthz/power_amplifier.hpp"

#include <cmath>

namespace subthz {

double rapp_amplitude(double a, double smoothness, double saturation) {
    if (std::isinf(smoothness)) {
        return a < saturation ? a : saturation;
    }
    const double two_p = 2.0 * smoothness;
    return a / std::pow(1.0 + std::pow(a / saturation, two_p), 1.0 / two_p);
}

TimeSignal apply_pa(const TimeSignal& sig, const PaModel& pa) {
    if (pa.kind == PaModel::Kind::Ideal) {
        return sig;
    }
    if (pa.backoff_db < 0.0) {
        throw DomainError("apply_pa: back-off must be non-negative");
    }
    const double mean = mean_power(sig.samples);
    TimeSignal out{CVector(sig.samples.size()), sig.sample_rate_hz};
    if (mean <= 0.0) {
        return out;
    }
    const double target = pa.saturation_amplitude * pa.saturation_amplitude *
                          std::pow(10.0, -pa.backoff_db / 10.0);
    const double g = std::sqrt(target / mean);
    for (std::size_t i = 0; i < sig.samples.size(); ++i) {
        const cplx x = sig.samples[i] * g;
        const double a = std::abs(x);
        if (a > 0.0) {
            out.samples[i] = x * (rapp_amplitude(a, pa.smoothness, pa.saturation_amplitude) / a);
        }
    }
    return out;
}

}  // namespace subthz

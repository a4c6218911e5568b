#include "subthz/phase_noise.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "subthz/dft.hpp"

namespace subthz {

bool PnModel::is_ideal() const { return std::isinf(psd0_dbc_hz) && psd0_dbc_hz < 0.0; }

// Pole/zero parameter sets of the 3GPP above-6 GHz evaluation models,
// specified at a 30 GHz carrier.
PnModel bs_pn_model() {
    PnModel m;
    m.name = "bs";
    m.psd0_dbc_hz = -79.4;
    m.zeros = {{1.8e6, 2.0}, {2.2e6, 2.0}, {40e6, 2.0}};
    m.poles = {{0.1e6, 2.0}, {0.2e6, 2.0}, {8e6, 2.0}};
    m.ref_carrier_hz = 30e9;
    m.side = OscillatorSide::Bs;
    return m;
}

PnModel ue_pn_model() {
    PnModel m;
    m.name = "ue";
    m.psd0_dbc_hz = -70.0;
    m.zeros = {{0.02e6, 2.0}, {6e6, 2.0}, {10e6, 2.0}};
    m.poles = {{0.005e6, 2.0}, {0.4e6, 2.0}, {0.6e6, 2.0}};
    m.ref_carrier_hz = 30e9;
    m.side = OscillatorSide::Ue;
    return m;
}

PnModel ideal_pn_model() {
    PnModel m;
    m.name = "off";
    m.psd0_dbc_hz = -std::numeric_limits<double>::infinity();
    return m;
}

double pn_psd(const PnModel& model, double offset_hz, double carrier_hz) {
    if (!(offset_hz > 0.0)) {
        throw DomainError("pn_psd: offset must be positive");
    }
    if (!(carrier_hz > 0.0)) {
        throw DomainError("pn_psd: carrier must be positive");
    }
    double shape_db = 0.0;
    for (const auto& z : model.zeros) {
        shape_db += 10.0 * std::log10(1.0 + std::pow(offset_hz / z.corner_hz, z.slope));
    }
    for (const auto& p : model.poles) {
        shape_db -= 10.0 * std::log10(1.0 + std::pow(offset_hz / p.corner_hz, p.slope));
    }
    return model.psd0_dbc_hz + shape_db + 20.0 * std::log10(carrier_hz / model.ref_carrier_hz);
}

PnSynthesizer::PnSynthesizer(const PnModel& model, double carrier_hz, double sample_rate_hz, std::size_t n)
    : n_(n) {
    if (n == 0) {
        throw InputError("generate_pn: n must be positive");
    }
    if (model.is_ideal()) {
        return;
    }
    std::size_t len = 1;
    while (len < 2 * n) {
        len *= 2;
    }
    const double df = sample_rate_hz / static_cast<double>(len);
    amplitude_.resize(len / 2 + 1, 0.0);
    for (std::size_t k = 1; k <= len / 2; ++k) {
        const double f = static_cast<double>(k) * df;
        amplitude_[k] = std::sqrt(std::pow(10.0, pn_psd(model, f, carrier_hz) / 10.0) * df);
    }
}

std::vector<double> PnSynthesizer::operator()(std::uint64_t seed) const {
    std::vector<double> phase(n_, 0.0);
    if (amplitude_.empty()) {
        return phase;
    }
    const std::size_t len = 2 * (amplitude_.size() - 1);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    CVector spec(len);
    // DC carries no power; bin len/2 is real.
    for (std::size_t k = 1; k <= len / 2; ++k) {
        const double amp = amplitude_[k];
        if (k == len / 2) {
            spec[k] = cplx(amp * gauss(rng) * std::sqrt(2.0), 0.0);
        } else {
            const cplx g(gauss(rng), gauss(rng));
            spec[k] = amp * g;
            spec[len - k] = std::conj(spec[k]);
        }
    }
    CVector time(len);
    idft_unscaled(spec, time);
    for (std::size_t i = 0; i < n_; ++i) {
        phase[i] = time[i].real();
    }
    return phase;
}

std::vector<double> generate_pn(const PnModel& model, double carrier_hz, double sample_rate_hz,
                                std::size_t n, std::uint64_t seed) {
    return PnSynthesizer(model, carrier_hz, sample_rate_hz, n)(seed);
}

TimeSignal apply_pn(const TimeSignal& sig, std::span<const double> phase) {
    if (phase.size() != sig.samples.size()) {
        throw InputError("apply_pn: phase length does not match the signal");
    }
    TimeSignal out{CVector(sig.samples.size()), sig.sample_rate_hz};
    for (std::size_t i = 0; i < phase.size(); ++i) {
        out.samples[i] = sig.samples[i] * std::polar(1.0, phase[i]);
    }
    return out;
}

}  // namespace subthz

#include "subthz/spectrum.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "subthz/dft.hpp"

namespace subthz {

namespace {

std::vector<double> hann(std::size_t n) {
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
    }
    return w;
}

// Averaged |DFT|^2 of windowed, half-overlapping segments, scaled to power per Hz.
std::vector<double> welch_bins(std::span<const cplx> x, double fs, std::size_t seg) {
    if (seg == 0 || x.size() < seg) {
        throw EstimationError("welch: signal shorter than one segment");
    }
    const auto w = hann(seg);
    double wpow = 0.0;
    for (double v : w) {
        wpow += v * v;
    }
    const std::size_t hop = seg / 2;
    std::vector<double> acc(seg, 0.0);
    CVector buf(seg);
    CVector spec(seg);
    std::size_t count = 0;
    for (std::size_t start = 0; start + seg <= x.size(); start += hop) {
        for (std::size_t i = 0; i < seg; ++i) {
            buf[i] = x[start + i] * w[i];
        }
        dft_unscaled(buf, spec);
        for (std::size_t i = 0; i < seg; ++i) {
            acc[i] += std::norm(spec[i]);
        }
        ++count;
    }
    for (auto& v : acc) {
        v /= static_cast<double>(count) * wpow * fs;
    }
    return acc;
}

}  // namespace

PsdEstimate welch_psd(std::span<const cplx> x, double sample_rate_hz, std::size_t segment_length) {
    const auto bins = welch_bins(x, sample_rate_hz, segment_length);
    const auto n = segment_length;
    PsdEstimate out;
    out.frequency_hz.resize(n);
    out.psd.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        // Reorder so that bin 0 is -fs/2.
        const std::size_t src = (i + n / 2) % n;
        const auto k = static_cast<double>(i) - static_cast<double>(n / 2);
        out.frequency_hz[i] = k * sample_rate_hz / static_cast<double>(n);
        out.psd[i] = bins[src];
    }
    return out;
}

PsdEstimate welch_psd_real(std::span<const double> x, double sample_rate_hz,
                           std::size_t segment_length) {
    CVector c(x.begin(), x.end());
    const auto bins = welch_bins(c, sample_rate_hz, segment_length);
    const auto n = segment_length;
    PsdEstimate out;
    for (std::size_t k = 1; k <= n / 2; ++k) {
        out.frequency_hz.push_back(static_cast<double>(k) * sample_rate_hz / static_cast<double>(n));
        out.psd.push_back(bins[k]);
    }
    return out;
}

double measure_aclr(const TimeSignal& sig, double channel_bw_hz, double centre_hz) {
    const double fs = sig.sample_rate_hz;
    if (!(channel_bw_hz > 0.0) || fs < 4.0 * channel_bw_hz * (1.0 - 1e-9)) {
        throw EstimationError("measure_aclr: signal must be at least 4x oversampled");
    }
    // Longest segment that still gives at least four half-overlapping
    // segments: the window main lobe smears the band edge into the adjacent
    // channel, so resolution matters more than averaging here.
    std::size_t seg = 256;
    while (seg * 5 <= sig.samples.size() * 2) {
        seg *= 2;
    }
    const auto est = welch_psd(sig.samples, fs, seg);
    double in = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    const double half = channel_bw_hz / 2.0;
    for (std::size_t i = 0; i < est.psd.size(); ++i) {
        const double f = est.frequency_hz[i] - centre_hz;
        if (std::abs(f) <= half) {
            in += est.psd[i];
        } else if (f > half && f <= 3.0 * half) {
            upper += est.psd[i];
        } else if (f < -half && f >= -3.0 * half) {
            lower += est.psd[i];
        }
    }
    const double adjacent = std::max(lower, upper);
    if (in <= 0.0) {
        throw EstimationError("measure_aclr: no in-channel power");
    }
    if (adjacent <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return 10.0 * std::log10(in / adjacent);
}

double measure_evm(std::span<const cplx> reference, std::span<const cplx> received) {
    if (reference.size() != received.size()) {
        throw InputError("measure_evm: size mismatch");
    }
    if (reference.empty()) {
        throw InputError("measure_evm: empty input");
    }
    cplx cross{};
    double rx_energy = 0.0;
    double ref_energy = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        cross += reference[i] * std::conj(received[i]);
        rx_energy += std::norm(received[i]);
        ref_energy += std::norm(reference[i]);
    }
    if (ref_energy <= 0.0) {
        throw InputError("measure_evm: reference has no energy");
    }
    const cplx gain = rx_energy > 0.0 ? cross / rx_energy : cplx{};
    double err = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        err += std::norm(gain * received[i] - reference[i]);
    }
    return 100.0 * std::sqrt(err / ref_energy);
}

double measure_evm(const ResourceGrid& reference, const ResourceGrid& received) {
    if (!reference.same_shape(received)) {
        throw InputError("measure_evm: grid shapes differ");
    }
    return measure_evm(reference.data(), received.data());
}

}  // namespace subthz

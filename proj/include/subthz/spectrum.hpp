#pragma once

#include <span>
#include <vector>

#include "subthz/types.hpp"

namespace subthz {

/// Two-sided power spectral density estimate, bins ordered from -fs/2 upward.
struct PsdEstimate {
    std::vector<double> frequency_hz;
    std::vector<double> psd;  // power per Hz
};

/// Welch estimate with a periodic Hann window and 50% overlap.
PsdEstimate welch_psd(std::span<const cplx> x, double sample_rate_hz, std::size_t segment_length);

/// Welch estimate of a real sequence for f in (0, fs/2]. Values are the
/// two-sided density at |f|, the same convention as a dBc/Hz phase-noise spec.
PsdEstimate welch_psd_real(std::span<const double> x, double sample_rate_hz,
                           std::size_t segment_length);

/// In-channel power over the worse adjacent channel (same width, offset by
/// +/- channel_bw_hz), in dB. The channel is centred at `centre_hz`; an
/// allocation with an even number of subcarriers sits half a spacing below DC.
/// Requires a sample rate of at least 4x channel_bw_hz.
double measure_aclr(const TimeSignal& sig, double channel_bw_hz, double centre_hz = 0.0);

/// RMS error vector magnitude (percent) after the least-squares complex gain
/// that best maps `received` onto `reference`.
double measure_evm(std::span<const cplx> reference, std::span<const cplx> received);
double measure_evm(const ResourceGrid& reference, const ResourceGrid& received);

}  // namespace subthz

#pragma once

#include <cstdint>
#include <limits>

#include "subthz/types.hpp"

namespace subthz {

/// Noise variance per sample for a target per-RE SNR. With unitary
/// transforms a unit-energy resource element against per-sample noise
/// variance v gives per-RE SNR 1/v after the FFT.
double noise_variance_for_snr(double snr_db);

/// Adds circular complex Gaussian noise of variance noise_variance_for_snr(snr_db).
/// snr_db = +inf returns the input.
TimeSignal apply_awgn(const TimeSignal& sig, double snr_db, std::uint64_t seed);

}  // namespace subthz

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "subthz/types.hpp"

namespace subthz {

enum class OscillatorSide { Bs, Ue };

/// One factor (1 + (f/corner)^slope) of the pole/zero PSD.
struct PsdCorner {
    double corner_hz = 0.0;
    double slope = 2.0;
};

/// Oscillator phase-noise PSD in multi-pole/zero form:
///
///   L(f) = psd0 * prod_z (1 + (f/fz)^az) / prod_p (1 + (f/fp)^ap)
///
/// specified at `ref_carrier_hz` and shifted by 20 log10(fc / ref) when
/// retuned. psd0_dbc_hz = -inf describes an ideal oscillator.
struct PnModel {
    std::string name;
    double psd0_dbc_hz = 0.0;
    std::vector<PsdCorner> poles;
    std::vector<PsdCorner> zeros;
    double ref_carrier_hz = 30e9;
    OscillatorSide side = OscillatorSide::Bs;

    bool is_ideal() const;
};

/// Base-station oscillator (pole/zero set at a 30 GHz reference).
PnModel bs_pn_model();
/// UE oscillator; noisier than the BS set.
PnModel ue_pn_model();
/// Ideal oscillator (no phase noise).
PnModel ideal_pn_model();

/// Single-sideband PSD in dBc/Hz at `offset_hz` for a carrier at `carrier_hz`.
double pn_psd(const PnModel& model, double offset_hz, double carrier_hz);

/// Real phase process (radians) with two-sided PSD L(|f|), synthesised by
/// shaping complex white Gaussian noise in the frequency domain (Hermitian
/// symmetric spectrum, FFT length >= 2n) and keeping the first n samples.
std::vector<double> generate_pn(const PnModel& model, double carrier_hz, double sample_rate_hz,
                                std::size_t n, std::uint64_t seed);

/// generate_pn with the spectral shaping precomputed, for repeated draws
/// of the same length and rate.
class PnSynthesizer {
public:
    PnSynthesizer(const PnModel& model, double carrier_hz, double sample_rate_hz, std::size_t n);
    std::vector<double> operator()(std::uint64_t seed) const;

private:
    std::size_t n_;
    std::vector<double> amplitude_;  // per positive-frequency bin; empty when ideal
};

/// Multiplies sample i by exp(j*phase[i]).
TimeSignal apply_pn(const TimeSignal& sig, std::span<const double> phase);

}  // namespace subthz

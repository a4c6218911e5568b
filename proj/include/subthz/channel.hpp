#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "subthz/numerology.hpp"
#include "subthz/types.hpp"

namespace subthz {

using Mat2 = Eigen::Matrix2cd;

inline constexpr double kSpeedOfLight = 299792458.0;

struct ChannelTap {
    double delay_s = 0.0;
    double power = 0.0;  // linear, fraction of the total
};

/// Effective two-port tapped-delay-line channel. Tap 0 carries the LOS
/// component (`los_power` of the total) plus its diffuse share; every other
/// tap is purely diffuse. Powers sum to one.
struct ChannelProfile {
    std::string name = "cdl-e";
    std::vector<ChannelTap> taps;
    double los_power = 0.0;
    double rician_k_db = 15.0;
    double rms_delay_spread_s = 10e-9;
    double ue_speed_mps = 3.0 / 3.6;
    double carrier_hz = 90e9;
    double xpr_db = 8.0;
    bool fading = true;

    double max_doppler_hz() const { return ue_speed_mps * carrier_hz / kSpeedOfLight; }
};

/// RMS delay spread of a tap list (power-weighted second central moment).
double rms_delay_spread(const std::vector<ChannelTap>& taps);

/// CDL-E derived profile: the TDL-E cluster delays/powers with the LOS
/// component re-weighted to `rician_k_db` (LOS over total diffuse power)
/// and the delays scaled to `rms_delay_spread_s`.
ChannelProfile cdl_e_profile(double rms_delay_spread_s, double rician_k_db, double ue_speed_mps,
                             double carrier_hz, double xpr_db = 8.0);

/// Frequency-flat, time-invariant channel sqrt(2)*I (calibration bypass).
ChannelProfile awgn_profile();

/// Unit-modulus-row LOS polarisation matrix: rotation mixing the two ports
/// with cross-polar leakage 10^(-xpr/10), scaled so every row has energy 2.
Mat2 los_matrix(double xpr_db);

/// Per-symbol 2x2 tap gains (rx x tx). Entries have unit mean power.
class MimoChannelRealization {
public:
    MimoChannelRealization(std::vector<double> delays_s, int symbols);

    int symbols() const { return symbols_; }
    int taps() const { return static_cast<int>(delays_s_.size()); }
    const std::vector<double>& delays_s() const { return delays_s_; }

    Mat2& gain(int symbol, int tap) { return gains_[index(symbol, tap)]; }
    const Mat2& gain(int symbol, int tap) const { return gains_[index(symbol, tap)]; }

private:
    std::size_t index(int symbol, int tap) const {
        return static_cast<std::size_t>(symbol) * delays_s_.size() + static_cast<std::size_t>(tap);
    }

    std::vector<double> delays_s_;
    int symbols_;
    std::vector<Mat2, Eigen::aligned_allocator<Mat2>> gains_;
};

/// Draws one channel: a static LOS matrix on tap 0 plus diffuse
/// taps as sum-of-sinusoids Jakes processes sampled at symbol centres.
MimoChannelRealization realize_channel(const ChannelProfile& profile, double duration_s,
                                       double symbol_period_s, std::uint64_t seed);

using PortSignals = std::array<TimeSignal, 2>;

struct ChannelOutput {
    PortSignals ports;
    bool delay_exceeds_cp = false;
};

/// Convolves the two transmit ports with the realization; the tap matrices
/// of symbol s apply to every output sample of symbol s. Delays are rounded
/// to the nearest sample.
ChannelOutput apply_channel(const PortSignals& tx, const MimoChannelRealization& channel,
                            const Numerology& num);

/// Per-RE 2x2 channel matrices seen after CP removal and FFT, consistent
/// with apply_channel (rounded delays). Indexed [symbol * K + k].
std::vector<Mat2, Eigen::aligned_allocator<Mat2>> channel_frequency_response(
    const MimoChannelRealization& channel, const Numerology& num);

}  // namespace subthz

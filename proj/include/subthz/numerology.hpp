#pragma once

#include <array>

namespace subthz {

inline constexpr std::array<int, 6> kSupportedScsKhz{120, 240, 480, 960, 1920, 3840};
inline constexpr int kSubcarriersPerPrb = 12;
inline constexpr int kSymbolsPerSlot = 14;
inline constexpr double kMaxChannelBandwidthHz = 2.16e9;
// Highest fraction of the FFT that may carry active subcarriers.
inline constexpr double kMaxFftOccupancy = 0.85;

struct Numerology {
    double scs_hz = 0.0;
    int fft_size = 0;
    int cp_samples = 0;
    int prb_count = 0;
    int active_subcarriers = 0;
    double sample_rate_hz = 0.0;
    int symbols_per_slot = kSymbolsPerSlot;

    int samples_per_symbol() const { return fft_size + cp_samples; }
    int samples_per_slot() const { return symbols_per_slot * samples_per_symbol(); }
    double symbol_duration_s() const { return samples_per_symbol() / sample_rate_hz; }
    double useful_duration_s() const { return fft_size / sample_rate_hz; }
    double cp_duration_s() const { return cp_samples / sample_rate_hz; }
    double slot_duration_s() const { return symbols_per_slot * symbol_duration_s(); }
    double occupied_bandwidth_hz() const { return active_subcarriers * scs_hz; }

    /// Frequency offset of active subcarrier k, in subcarriers, relative to DC.
    /// The allocation is centred with subcarrier K/2 on DC.
    int subcarrier_offset(int k) const { return k - active_subcarriers / 2; }

    /// FFT bin carrying active subcarrier k.
    int fft_bin(int k) const {
        const int off = subcarrier_offset(k);
        return off >= 0 ? off : off + fft_size;
    }
};

bool is_supported_scs(double scs_hz);

/// Largest PRB allocation for an SCS under the 2.16 GHz channel, capped at 180.
int max_prbs(double scs_hz);

Numerology derive_numerology(double scs_hz, int prb_count);

}  // namespace subthz

#pragma once

#include <span>
#include <string>
#include <vector>

#include "subthz/numerology.hpp"
#include "subthz/types.hpp"

namespace subthz {

enum class WaveformKind { Ofdm, ScFdma };

std::string to_string(WaveformKind kind);
WaveformKind parse_waveform(const std::string& name);

// Sample conventions
// ------------------
// Active subcarrier k sits on FFT bin fft_bin(k) (allocation centred on DC,
// DC bin used). Every transform is unitary, so one unit-energy resource
// element contributes unit energy to the symbol body in time and the time
// signal's mean power over a body is (active/fft_size) for unit-energy REs.
// The cyclic prefix copies the last cp_samples of each body.

/// CP-OFDM: one grid row per symbol, one column per active subcarrier.
/// `oversampling` > 1 zero-pads the IDFT (used by the PA/ACLR analysis).
TimeSignal ofdm_modulate(const ResourceGrid& grid, const Numerology& num, int oversampling = 1);

/// Inverse of ofdm_modulate: discards the CP and returns active subcarriers.
ResourceGrid ofdm_demodulate(const TimeSignal& sig, const Numerology& num, int oversampling = 1);

/// Length-M unitary DFT of every row (M = active subcarriers).
ResourceGrid dft_spread(const ResourceGrid& subsymbols);
/// Inverse of dft_spread.
ResourceGrid dft_despread(const ResourceGrid& spread);

/// Pilot sub-symbols occupying fixed positions in every SC-FDMA symbol.
struct SubsymbolPilots {
    std::vector<int> positions;  // sorted, within [0, M)
    ResourceGrid values;         // symbols x positions.size()
};

/// Interleaves data sub-symbols around the pilot positions, row by row.
/// Throws ConfigError when a pilot position falls outside [0, M) and
/// InputError when the data count does not fill the remaining positions.
ResourceGrid assemble_subsymbols(std::span<const cplx> data, const SubsymbolPilots& pilots,
                                 const Numerology& num);

/// SC-FDMA (DFT-s-OFDM) from a full sub-symbol grid (symbols x M).
TimeSignal scfdma_modulate(const ResourceGrid& subsymbols, const Numerology& num,
                           int oversampling = 1);
TimeSignal scfdma_modulate(std::span<const cplx> data, const SubsymbolPilots& pilots,
                           const Numerology& num, int oversampling = 1);

/// Inverse of scfdma_modulate: returns the sub-symbol grid.
ResourceGrid scfdma_demodulate(const TimeSignal& sig, const Numerology& num, int oversampling = 1);

/// Level (dB above mean power) exceeded by the instantaneous power of a
/// given fraction of samples. Needs at least 10/probability samples.
double papr_ccdf(const TimeSignal& sig, double probability);

/// Level (dB) exceeded by the per-symbol peak-to-average ratio with the
/// given probability; each symbol body (CP excluded) is one trial.
/// Needs at least 10/probability symbols.
double symbol_papr_ccdf(const TimeSignal& sig, const Numerology& num, double probability,
                        int oversampling = 1);

/// Empirical CCDF of instantaneous power over mean power at each level (dB).
std::vector<double> power_ccdf(const TimeSignal& sig, std::span<const double> levels_db);

}  // namespace subthz

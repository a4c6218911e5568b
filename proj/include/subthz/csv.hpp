#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "subthz/sweep.hpp"

namespace subthz {

/// Shortest round-trip decimal form of a double.
std::string format_number(double v);

/// One row per SNR point: config_id, waveform, scs_khz, modulation, rank,
/// ptrs_scheme, snr_db, blocks, errors, bler.
void write_sweep_csv(std::ostream& os, const std::vector<SweepResult>& results);

/// config_id, required_snr_db ("NA" when the target is not reached).
void write_summary_csv(std::ostream& os, const std::vector<SweepResult>& results);

}  // namespace subthz

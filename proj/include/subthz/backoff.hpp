#pragma once

#include <cstdint>

#include "subthz/modulation.hpp"
#include "subthz/numerology.hpp"
#include "subthz/power_amplifier.hpp"
#include "subthz/waveform.hpp"

namespace subthz {

/// EVM ceiling (percent) a modulation must meet at the PA output.
double evm_limit_percent(Modulation mod);

struct BackoffSettings {
    Numerology numerology;
    int symbols = 28;
    int oversampling = 4;
    double aclr_min_db = 20.0;
    double step_db = 0.1;
    double max_backoff_db = 20.0;
    /// Channel bandwidth for ACLR; 0 selects the occupied bandwidth.
    double channel_bw_hz = 0.0;
    std::uint64_t seed = 1;
};

struct BackoffMetrics {
    double aclr_db = 0.0;
    double evm_percent = 0.0;
};

/// Random full-allocation test signal for one waveform/modulation pair:
/// the reference symbols (sub-symbols for SC-FDMA) plus the oversampled
/// transmit signal.
class BackoffProbe {
public:
    BackoffProbe(WaveformKind waveform, Modulation mod, const BackoffSettings& settings);

    /// ACLR and EVM after the PA at the back-off carried by `pa`.
    BackoffMetrics evaluate(const PaModel& pa) const;

    const TimeSignal& signal() const { return signal_; }

private:
    WaveformKind waveform_;
    BackoffSettings settings_;
    ResourceGrid reference_;
    TimeSignal signal_;
    double channel_bw_hz_;
    double centre_hz_;
};

/// Smallest back-off on the step grid in [0, max] meeting ACLR >= aclr_min_db
/// and EVM <= evm_limit_percent(mod). Throws AnalysisError when none does.
double required_backoff(WaveformKind waveform, Modulation mod, const PaModel& pa,
                        const BackoffSettings& settings);

}  // namespace subthz

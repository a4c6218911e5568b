#include "subthz/backoff.hpp"

#include <cmath>

#include "subthz/rng.hpp"
#include "subthz/spectrum.hpp"

namespace subthz {

double evm_limit_percent(Modulation mod) {
    switch (mod) {
        case Modulation::Qpsk: return 17.5;
        case Modulation::Qam16: return 12.5;
        case Modulation::Qam64: return 8.0;
        case Modulation::Qam256: return 3.5;
    }
    return 0.0;
}

BackoffProbe::BackoffProbe(WaveformKind waveform, Modulation mod, const BackoffSettings& settings)
    : waveform_(waveform), settings_(settings) {
    const auto& num = settings_.numerology;
    Numerology slot = num;
    slot.symbols_per_slot = settings_.symbols;
    const auto count = static_cast<std::size_t>(settings_.symbols) *
                       static_cast<std::size_t>(num.active_subcarriers);
    const auto symbols = random_symbols(count, mod, stream_seed(settings_.seed, "backoff-data"));
    reference_ = ResourceGrid(settings_.symbols, num.active_subcarriers);
    std::copy(symbols.begin(), symbols.end(), reference_.data().begin());
    signal_ = waveform_ == WaveformKind::Ofdm
                  ? ofdm_modulate(reference_, slot, settings_.oversampling)
                  : scfdma_modulate(reference_, slot, settings_.oversampling);
    channel_bw_hz_ = settings_.channel_bw_hz > 0.0 ? settings_.channel_bw_hz
                                                   : num.occupied_bandwidth_hz();
    centre_hz_ = 0.5 * (num.subcarrier_offset(0) + num.subcarrier_offset(num.active_subcarriers - 1)) * num.scs_hz;
}

BackoffMetrics BackoffProbe::evaluate(const PaModel& pa) const {
    const auto out = apply_pa(signal_, pa);
    BackoffMetrics m;
    m.aclr_db = measure_aclr(out, channel_bw_hz_, centre_hz_);
    const auto rx = waveform_ == WaveformKind::Ofdm
                        ? ofdm_demodulate(out, settings_.numerology, settings_.oversampling)
                        : scfdma_demodulate(out, settings_.numerology, settings_.oversampling);
    m.evm_percent = measure_evm(reference_, rx);
    return m;
}

double required_backoff(WaveformKind waveform, Modulation mod, const PaModel& pa,
                        const BackoffSettings& settings) {
    if (pa.kind == PaModel::Kind::Ideal) {
        return 0.0;
    }
    const BackoffProbe probe(waveform, mod, settings);
    const double limit = evm_limit_percent(mod);
    const int steps = static_cast<int>(std::lround(settings.max_backoff_db / settings.step_db));
    for (int i = 0; i <= steps; ++i) {
        PaModel trial = pa;
        trial.backoff_db = i * settings.step_db;
        const auto m = probe.evaluate(trial);
        if (m.aclr_db >= settings.aclr_min_db && m.evm_percent <= limit) {
            return trial.backoff_db;
        }
    }
    throw AnalysisError("required_backoff: constraints not met within the search range");
}

}  // namespace subthz

#include "subthz/waveform.hpp"

#include <algorithm>
#include <cmath>

#include "subthz/dft.hpp"

namespace subthz {

std::string to_string(WaveformKind kind) {
    return kind == WaveformKind::Ofdm ? "ofdm" : "sc-fdma";
}

WaveformKind parse_waveform(const std::string& name) {
    if (name == "ofdm") return WaveformKind::Ofdm;
    if (name == "sc-fdma") return WaveformKind::ScFdma;
    throw ConfigError("unknown waveform '" + name + "'");
}

namespace {

int bin_for(const Numerology& num, int k, int nfft) {
    const int off = num.subcarrier_offset(k);
    return off >= 0 ? off : off + nfft;
}

void check_oversampling(int oversampling) {
    if (oversampling < 1) {
        throw InputError("oversampling factor must be >= 1");
    }
}

}  // namespace

TimeSignal ofdm_modulate(const ResourceGrid& grid, const Numerology& num, int oversampling) {
    check_oversampling(oversampling);
    if (grid.columns() != num.active_subcarriers) {
        throw InputError("ofdm_modulate: grid width does not match active subcarriers");
    }
    const int nfft = num.fft_size * oversampling;
    const int ncp = num.cp_samples * oversampling;
    // Keeps the mean sample power independent of the oversampling factor.
    const double gain = std::sqrt(static_cast<double>(oversampling));
    TimeSignal sig;
    sig.sample_rate_hz = num.sample_rate_hz * oversampling;
    sig.samples.resize(static_cast<std::size_t>(grid.symbols()) * static_cast<std::size_t>(nfft + ncp));
    CVector freq(static_cast<std::size_t>(nfft));
    CVector body(static_cast<std::size_t>(nfft));
    for (int s = 0; s < grid.symbols(); ++s) {
        std::fill(freq.begin(), freq.end(), cplx{});
        const auto row = grid.symbol(s);
        for (int k = 0; k < grid.columns(); ++k) {
            freq[static_cast<std::size_t>(bin_for(num, k, nfft))] = row[static_cast<std::size_t>(k)] * gain;
        }
        idft(freq, body);
        auto* out = sig.samples.data() + static_cast<std::size_t>(s) * static_cast<std::size_t>(nfft + ncp);
        std::copy(body.end() - ncp, body.end(), out);
        std::copy(body.begin(), body.end(), out + ncp);
    }
    return sig;
}

ResourceGrid ofdm_demodulate(const TimeSignal& sig, const Numerology& num, int oversampling) {
    check_oversampling(oversampling);
    const int nfft = num.fft_size * oversampling;
    const int ncp = num.cp_samples * oversampling;
    const auto sym_len = static_cast<std::size_t>(nfft + ncp);
    if (sig.samples.empty() || sig.samples.size() % sym_len != 0) {
        throw InputError("ofdm_demodulate: length is not a whole number of symbols");
    }
    const int symbols = static_cast<int>(sig.samples.size() / sym_len);
    const double gain = 1.0 / std::sqrt(static_cast<double>(oversampling));
    ResourceGrid grid(symbols, num.active_subcarriers);
    CVector freq(static_cast<std::size_t>(nfft));
    for (int s = 0; s < symbols; ++s) {
        const auto body = std::span<const cplx>(sig.samples).subspan(
            static_cast<std::size_t>(s) * sym_len + static_cast<std::size_t>(ncp),
            static_cast<std::size_t>(nfft));
        dft(body, freq);
        auto row = grid.symbol(s);
        for (int k = 0; k < num.active_subcarriers; ++k) {
            row[static_cast<std::size_t>(k)] = freq[static_cast<std::size_t>(bin_for(num, k, nfft))] * gain;
        }
    }
    return grid;
}

ResourceGrid dft_spread(const ResourceGrid& subsymbols) {
    ResourceGrid out(subsymbols.symbols(), subsymbols.columns(), subsymbols.layer());
    for (int s = 0; s < subsymbols.symbols(); ++s) {
        dft(subsymbols.symbol(s), out.symbol(s));
    }
    return out;
}

ResourceGrid dft_despread(const ResourceGrid& spread) {
    ResourceGrid out(spread.symbols(), spread.columns(), spread.layer());
    for (int s = 0; s < spread.symbols(); ++s) {
        idft(spread.symbol(s), out.symbol(s));
    }
    return out;
}

ResourceGrid assemble_subsymbols(std::span<const cplx> data, const SubsymbolPilots& pilots,
                                 const Numerology& num) {
    const int m = num.active_subcarriers;
    for (std::size_t i = 0; i < pilots.positions.size(); ++i) {
        const int p = pilots.positions[i];
        if (p < 0 || p >= m || (i > 0 && p <= pilots.positions[i - 1])) {
            throw ConfigError("PTRS sub-symbol positions must be increasing and within [0, M)");
        }
    }
    const int symbols = num.symbols_per_slot;
    const int npilot = static_cast<int>(pilots.positions.size());
    if (npilot > 0 && (pilots.values.symbols() != symbols || pilots.values.columns() != npilot)) {
        throw InputError("assemble_subsymbols: pilot value grid has the wrong shape");
    }
    const auto per_symbol = static_cast<std::size_t>(m - npilot);
    if (data.size() != per_symbol * static_cast<std::size_t>(symbols)) {
        throw InputError("assemble_subsymbols: data count does not fill the slot");
    }
    ResourceGrid grid(symbols, m);
    std::size_t d = 0;
    for (int s = 0; s < symbols; ++s) {
        int next = 0;
        for (int j = 0; j < m; ++j) {
            if (next < npilot && pilots.positions[static_cast<std::size_t>(next)] == j) {
                grid(s, j) = pilots.values(s, next);
                ++next;
            } else {
                grid(s, j) = data[d++];
            }
        }
    }
    return grid;
}

TimeSignal scfdma_modulate(const ResourceGrid& subsymbols, const Numerology& num, int oversampling) {
    if (subsymbols.columns() != num.active_subcarriers) {
        throw InputError("scfdma_modulate: sub-symbol count per symbol must equal M");
    }
    return ofdm_modulate(dft_spread(subsymbols), num, oversampling);
}

TimeSignal scfdma_modulate(std::span<const cplx> data, const SubsymbolPilots& pilots,
                           const Numerology& num, int oversampling) {
    return scfdma_modulate(assemble_subsymbols(data, pilots, num), num, oversampling);
}

ResourceGrid scfdma_demodulate(const TimeSignal& sig, const Numerology& num, int oversampling) {
    return dft_despread(ofdm_demodulate(sig, num, oversampling));
}

namespace {

double quantile_level_db(std::vector<double> values, double probability) {
    // Smallest level exceeded by at most `probability` of the values.
    const auto n = values.size();
    const auto exceed = static_cast<std::size_t>(std::floor(probability * static_cast<double>(n)));
    const auto idx = n - 1 - std::min(exceed, n - 1);
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(idx), values.end());
    return 10.0 * std::log10(values[idx]);
}

void check_probability(double probability) {
    if (!(probability > 0.0 && probability < 1.0)) {
        throw DomainError("CCDF probability must lie in (0, 1)");
    }
}

}  // namespace

double papr_ccdf(const TimeSignal& sig, double probability) {
    check_probability(probability);
    if (static_cast<double>(sig.samples.size()) < 10.0 / probability) {
        throw EstimationError("papr_ccdf: need at least 10/probability samples");
    }
    const double mean = mean_power(sig.samples);
    if (mean <= 0.0) {
        throw EstimationError("papr_ccdf: signal has no power");
    }
    std::vector<double> ratio(sig.samples.size());
    for (std::size_t i = 0; i < ratio.size(); ++i) {
        ratio[i] = std::norm(sig.samples[i]) / mean;
    }
    return quantile_level_db(std::move(ratio), probability);
}

double symbol_papr_ccdf(const TimeSignal& sig, const Numerology& num, double probability,
                        int oversampling) {
    check_probability(probability);
    const auto nfft = static_cast<std::size_t>(num.fft_size * oversampling);
    const auto ncp = static_cast<std::size_t>(num.cp_samples * oversampling);
    const auto sym_len = nfft + ncp;
    if (sig.samples.size() % sym_len != 0) {
        throw InputError("symbol_papr_ccdf: length is not a whole number of symbols");
    }
    const auto symbols = sig.samples.size() / sym_len;
    if (static_cast<double>(symbols) < 10.0 / probability) {
        throw EstimationError("symbol_papr_ccdf: need at least 10/probability symbols");
    }
    std::vector<double> papr(symbols);
    for (std::size_t s = 0; s < symbols; ++s) {
        const auto body = std::span<const cplx>(sig.samples).subspan(s * sym_len + ncp, nfft);
        double peak = 0.0;
        for (const auto& v : body) {
            peak = std::max(peak, std::norm(v));
        }
        const double mean = mean_power(body);
        if (mean <= 0.0) {
            throw EstimationError("symbol_papr_ccdf: empty symbol");
        }
        papr[s] = peak / mean;
    }
    return quantile_level_db(std::move(papr), probability);
}

std::vector<double> power_ccdf(const TimeSignal& sig, std::span<const double> levels_db) {
    const double mean = mean_power(sig.samples);
    if (sig.samples.empty() || mean <= 0.0) {
        throw EstimationError("power_ccdf: signal has no power");
    }
    std::vector<double> ratio_db(sig.samples.size());
    for (std::size_t i = 0; i < ratio_db.size(); ++i) {
        ratio_db[i] = 10.0 * std::log10(std::max(std::norm(sig.samples[i]) / mean, 1e-300));
    }
    std::sort(ratio_db.begin(), ratio_db.end());
    std::vector<double> out;
    out.reserve(levels_db.size());
    for (double level : levels_db) {
        const auto above = ratio_db.end() - std::upper_bound(ratio_db.begin(), ratio_db.end(), level);
        out.push_back(static_cast<double>(above) / static_cast<double>(ratio_db.size()));
    }
    return out;
}

}  // namespace subthz

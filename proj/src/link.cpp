#include "subthz/link.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "subthz/awgn.hpp"
#include "subthz/crc.hpp"
#include "subthz/dft.hpp"
#include "subthz/equalizer.hpp"
#include "subthz/llr.hpp"
#include "subthz/modulation.hpp"
#include "subthz/phase_noise.hpp"
#include "subthz/rng.hpp"
#include "subthz/waveform.hpp"

namespace subthz {
namespace {

std::vector<std::vector<int>> free_positions(const PtrsLayout& layout, const Numerology& num) {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(num.symbols_per_slot));
    for (int s = 0; s < num.symbols_per_slot; ++s) {
        std::vector<char> used(static_cast<std::size_t>(num.active_subcarriers), 0);
        for (int p : layout.at(s)) used[static_cast<std::size_t>(p)] = 1;
        for (int c = 0; c < num.active_subcarriers; ++c) {
            if (!used[static_cast<std::size_t>(c)]) out[static_cast<std::size_t>(s)].push_back(c);
        }
    }
    return out;
}

int coded_bits_for(const LinkConfig& cfg, const Numerology& num, const PtrsLayout& layout) {
    const long res = static_cast<long>(num.symbols_per_slot) * num.active_subcarriers - layout.count();
    return static_cast<int>(res * cfg.rank * bits_per_symbol(cfg.modulation));
}

// Unwrapped per-symbol phases from the symbols that carry an estimate,
// linearly interpolated in between and held at the edges.
std::vector<double> interpolate_symbol_phases(const std::vector<int>& at, std::vector<double> phase, int symbols) {
    for (std::size_t i = 1; i < phase.size(); ++i) {
        phase[i] -= 2.0 * std::numbers::pi * std::round((phase[i] - phase[i - 1]) / (2.0 * std::numbers::pi));
    }
    std::vector<double> out(static_cast<std::size_t>(symbols));
    std::size_t seg = 0;
    for (int s = 0; s < symbols; ++s) {
        if (s <= at.front()) {
            out[static_cast<std::size_t>(s)] = phase.front();
        } else if (s >= at.back()) {
            out[static_cast<std::size_t>(s)] = phase.back();
        } else {
            while (s > at[seg + 1]) ++seg;
            const double t = static_cast<double>(s - at[seg]) / (at[seg + 1] - at[seg]);
            out[static_cast<std::size_t>(s)] = phase[seg] + t * (phase[seg + 1] - phase[seg]);
        }
    }
    return out;
}

}  // namespace

LinkSimulator::LinkSimulator(const LinkConfig& cfg)
    : cfg_((validate_config(cfg), cfg)),
      num_(cfg_.numerology()),
      layout_(ptrs_positions(cfg_.ptrs, num_)),
      code_(QcLdpcCode::for_coded_bits(coded_bits_for(cfg_, num_, layout_))),
      channel_(cfg_.channel_profile()),
      tx_pn_(cfg_.tx_pn()),
      rx_pn_(cfg_.rx_pn()),
      tx_pn_gen_(tx_pn_, cfg_.carrier_hz(), num_.sample_rate_hz, static_cast<std::size_t>(num_.samples_per_slot())),
      rx_pn_gen_(rx_pn_, cfg_.carrier_hz(), num_.sample_rate_hz, static_cast<std::size_t>(num_.samples_per_slot())),
      data_positions_(free_positions(layout_, num_)) {
    for (const auto& row : data_positions_) data_res_ += static_cast<int>(row.size());
    if (payload_bits() < 1) {
        throw ConfigError("allocation too small to carry a transport block");
    }
    const std::uint64_t pilot_seed = stream_seed(cfg_.sweep.master_seed, "ptrs-pilots");
    for (int s = 0; s < num_.symbols_per_slot; ++s) {
        pilots_.push_back(random_symbols(layout_.at(s).size(), Modulation::Qpsk,
                                         derive_seed({pilot_seed, static_cast<std::uint64_t>(s)})));
    }
}

int LinkSimulator::payload_bits() const { return code_.info_bits() - kCrcBits; }

DropOutcome LinkSimulator::run_drop(double snr_db, int snr_index, std::uint64_t drop_index) const {
    DropOutcome out;
    const std::uint64_t seed =
        derive_seed({cfg_.sweep.master_seed, static_cast<std::uint64_t>(snr_index), drop_index});
    const int rank = cfg_.rank;
    const int k_count = num_.active_subcarriers;
    const int n_sym = num_.symbols_per_slot;
    const bool scfdma = cfg_.waveform == WaveformKind::ScFdma;

    // Transport block.
    std::vector<std::uint8_t> payload(static_cast<std::size_t>(payload_bits()));
    {
        std::mt19937_64 rng(stream_seed(seed, "bits"));
        for (std::size_t i = 0; i < payload.size(); i += 64) {
            const auto word = rng();
            for (std::size_t b = 0; b < 64 && i + b < payload.size(); ++b) {
                payload[i + b] = static_cast<std::uint8_t>((word >> b) & 1U);
            }
        }
    }
    const auto coded = code_.encode(crc_attach(payload));
    const CVector tx_syms = map_bits(coded, cfg_.modulation);

    // Layer grids (sub-symbol grids for SC-FDMA).
    std::array<ResourceGrid, 2> layers{ResourceGrid(n_sym, k_count, 0), ResourceGrid(n_sym, k_count, 1)};
    std::size_t idx = 0;
    for (int s = 0; s < n_sym; ++s) {
        for (int c : data_positions_[static_cast<std::size_t>(s)]) {
            for (int l = 0; l < rank; ++l) layers[static_cast<std::size_t>(l)](s, c) = tx_syms[idx++];
        }
        const auto& pos = layout_.at(s);
        for (std::size_t i = 0; i < pos.size(); ++i) layers[0](s, pos[i]) = pilots_[static_cast<std::size_t>(s)][i];
    }

    const double layer_amp = 1.0 / std::sqrt(static_cast<double>(rank));
    PortSignals tx;
    for (int p = 0; p < 2; ++p) {
        if (p < rank) {
            ResourceGrid freq = scfdma ? dft_spread(layers[static_cast<std::size_t>(p)]) : layers[static_cast<std::size_t>(p)];
            for (auto& v : freq.data()) v *= layer_amp;
            tx[static_cast<std::size_t>(p)] = ofdm_modulate(freq, num_);
        } else {
            tx[static_cast<std::size_t>(p)].samples.assign(tx[0].samples.size(), cplx{});
            tx[static_cast<std::size_t>(p)].sample_rate_hz = tx[0].sample_rate_hz;
        }
    }

    // Impairments.
    if (!tx_pn_.is_ideal()) {
        const auto phase = tx_pn_gen_(stream_seed(seed, "pn-tx"));
        for (auto& port : tx) port = apply_pn(port, phase);
    }
    const auto realization =
        realize_channel(channel_, num_.slot_duration_s(), num_.symbol_duration_s(), stream_seed(seed, "channel"));
    ChannelOutput ch = apply_channel(tx, realization, num_);
    out.delay_exceeds_cp = ch.delay_exceeds_cp;
    if (!rx_pn_.is_ideal()) {
        const auto phase = rx_pn_gen_(stream_seed(seed, "pn-rx"));
        for (auto& port : ch.ports) port = apply_pn(port, phase);
    }
    ch.ports[0] = apply_awgn(ch.ports[0], snr_db, stream_seed(seed, "noise-0"));
    ch.ports[1] = apply_awgn(ch.ports[1], snr_db, stream_seed(seed, "noise-1"));

    // Receiver.
    const std::array<ResourceGrid, 2> rx{ofdm_demodulate(ch.ports[0], num_), ofdm_demodulate(ch.ports[1], num_)};
    auto h = channel_frequency_response(realization, num_);
    for (auto& m : h) m *= layer_amp;
    const double noise_var = noise_variance_for_snr(snr_db);

    CVector est(tx_syms.size());
    std::vector<double> sinr(tx_syms.size());
    try {
        auto eq = mmse_equalize(rx, h, noise_var, rank);
        // Per layer: per-RE symbols and SINR after compensation.
        std::array<ResourceGrid, 2> sym;
        std::array<std::vector<double>, 2> snr_re;
        for (int l = 0; l < rank; ++l) {
            auto& e = eq[static_cast<std::size_t>(l)];
            if (!scfdma) {
                sym[static_cast<std::size_t>(l)] = std::move(e.symbols);
                snr_re[static_cast<std::size_t>(l)] = std::move(e.sinr);
                continue;
            }
            // Re-bias, despread, normalise by the mean gain of the symbol.
            ResourceGrid z(n_sym, k_count, l);
            std::vector<double> zs(static_cast<std::size_t>(n_sym) * static_cast<std::size_t>(k_count));
            CVector row(static_cast<std::size_t>(k_count));
            for (int s = 0; s < n_sym; ++s) {
                const auto g = std::span<const double>(e.gain).subspan(static_cast<std::size_t>(s) * static_cast<std::size_t>(k_count),
                                                                       static_cast<std::size_t>(k_count));
                double gbar = 0.0;
                for (int k = 0; k < k_count; ++k) {
                    row[static_cast<std::size_t>(k)] = e.symbols(s, k) * g[static_cast<std::size_t>(k)];
                    gbar += g[static_cast<std::size_t>(k)];
                }
                gbar /= k_count;
                if (!(gbar > 0.0)) {
                    throw EstimationError("zero MMSE gain over an SC-FDMA symbol");
                }
                idft(row, z.symbol(s));
                for (auto& v : z.symbol(s)) v /= gbar;
                const double ss = despread_sinr(g);
                std::fill_n(zs.begin() + static_cast<long>(s) * k_count, k_count, ss);
            }
            sym[static_cast<std::size_t>(l)] = std::move(z);
            snr_re[static_cast<std::size_t>(l)] = std::move(zs);
        }

        auto pilot_values = [&](int s) {
            CVector v;
            for (int p : layout_.at(s)) v.push_back(sym[0](s, p));
            return v;
        };
        switch (layout_.scheme) {
            case PtrsScheme::None:
                break;
            case PtrsScheme::DistributedFd: {
                std::vector<int> at;
                std::vector<double> ph;
                for (int s = 0; s < n_sym; ++s) {
                    if (layout_.at(s).empty()) continue;
                    at.push_back(s);
                    ph.push_back(estimate_cpe(pilot_values(s), pilots_[static_cast<std::size_t>(s)]));
                }
                const auto phase = interpolate_symbol_phases(at, ph, n_sym);
                for (int l = 0; l < rank; ++l) {
                    for (int s = 0; s < n_sym; ++s) {
                        const cplx r = std::polar(1.0, -phase[static_cast<std::size_t>(s)]);
                        for (auto& v : sym[static_cast<std::size_t>(l)].symbol(s)) v *= r;
                    }
                }
                break;
            }
            case PtrsScheme::BlockFd: {
                for (int s = 0; s < n_sym; ++s) {
                    const auto ici = estimate_ici(pilot_values(s), pilots_[static_cast<std::size_t>(s)], cfg_.ptrs.ici_half_width);
                    const auto derot = ici_derotation(ici, num_.fft_size);
                    if (!derot.valid) {
                        out.compensation_skipped = true;
                        continue;
                    }
                    for (int l = 0; l < rank; ++l) {
                        auto row = sym[static_cast<std::size_t>(l)].symbol(s);
                        const auto fixed = apply_derotation(row, derot, num_);
                        std::copy(fixed.begin(), fixed.end(), row.begin());
                    }
                }
                break;
            }
            case PtrsScheme::TdGroups:
            case PtrsScheme::TdGroupsEnhanced: {
                for (int s = 0; s < n_sym; ++s) {
                    const auto& pos = layout_.at(s);
                    const auto track = track_pn_td(pilot_values(s), pilots_[static_cast<std::size_t>(s)], pos,
                                                   layout_.group_size, k_count);
                    for (int l = 0; l < rank; ++l) {
                        auto row = sym[static_cast<std::size_t>(l)].symbol(s);
                        for (int j = 0; j < k_count; ++j) {
                            row[static_cast<std::size_t>(j)] *= std::polar(1.0, -track[static_cast<std::size_t>(j)]);
                        }
                    }
                }
                break;
            }
        }

        // Residual distortion on the compensated pilots, net of thermal noise.
        double residual = 0.0;
        {
            double err = 0.0;
            double thermal = 0.0;
            std::size_t n = 0;
            for (int s = 0; s < n_sym; ++s) {
                const auto& pos = layout_.at(s);
                for (std::size_t i = 0; i < pos.size(); ++i) {
                    err += std::norm(sym[0](s, pos[i]) - pilots_[static_cast<std::size_t>(s)][i]);
                    thermal += 1.0 / std::max(snr_re[0][static_cast<std::size_t>(s) * static_cast<std::size_t>(k_count) +
                                                        static_cast<std::size_t>(pos[i])],
                                              1e-12);
                    ++n;
                }
            }
            if (n > 0) residual = std::max(0.0, (err - thermal) / static_cast<double>(n));
        }
        out.residual_variance = residual;

        idx = 0;
        for (int s = 0; s < n_sym; ++s) {
            for (int c : data_positions_[static_cast<std::size_t>(s)]) {
                for (int l = 0; l < rank; ++l) {
                    est[idx] = sym[static_cast<std::size_t>(l)](s, c);
                    const double g = std::max(snr_re[static_cast<std::size_t>(l)][static_cast<std::size_t>(s) * static_cast<std::size_t>(k_count) +
                                                                                  static_cast<std::size_t>(c)],
                                              1e-12);
                    sinr[idx] = 1.0 / (1.0 / g + residual);
                    ++idx;
                }
            }
        }
    } catch (const EstimationError&) {
        out.numerical_failure = true;
        return out;
    }

    double mse = 0.0;
    for (std::size_t i = 0; i < est.size(); ++i) mse += std::norm(est[i] - tx_syms[i]);
    out.data_mse = mse / static_cast<double>(est.size());

    const auto llrs = demap_llr(est, cfg_.modulation, sinr);
    const auto dec = ldpc_decode(code_, llrs, cfg_.fec);
    out.parity_ok = dec.parity_ok;
    out.decoder_iterations = dec.iterations;
    out.crc_ok = crc_check(dec.info);
    const bool success = out.parity_ok && out.crc_ok;
    out.block_error = !success;
    if (success) {
        out.undetected_error = !std::equal(payload.begin(), payload.end(), dec.info.begin());
    }
    return out;
}

DropOutcome run_drop(const LinkConfig& cfg, double snr_db, int snr_index, std::uint64_t drop_index) {
    return LinkSimulator(cfg).run_drop(snr_db, snr_index, drop_index);
}

}  // namespace subthz

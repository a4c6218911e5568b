#include "subthz/ptrs.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "subthz/dft.hpp"

namespace subthz {

std::string to_string(PtrsScheme scheme) {
    switch (scheme) {
        case PtrsScheme::None: return "none";
        case PtrsScheme::DistributedFd: return "distributed";
        case PtrsScheme::BlockFd: return "block";
        case PtrsScheme::TdGroups: return "td-groups";
        case PtrsScheme::TdGroupsEnhanced: return "td-enhanced";
    }
    return "?";
}

PtrsScheme parse_ptrs_scheme(const std::string& name) {
    if (name == "none") return PtrsScheme::None;
    if (name == "distributed") return PtrsScheme::DistributedFd;
    if (name == "block") return PtrsScheme::BlockFd;
    if (name == "td-groups") return PtrsScheme::TdGroups;
    if (name == "td-enhanced") return PtrsScheme::TdGroupsEnhanced;
    throw ConfigError("unknown PTRS scheme '" + name + "'");
}

bool scheme_supports(PtrsScheme scheme, WaveformKind waveform) {
    switch (scheme) {
        case PtrsScheme::None: return true;
        case PtrsScheme::DistributedFd:
        case PtrsScheme::BlockFd: return waveform == WaveformKind::Ofdm;
        case PtrsScheme::TdGroups:
        case PtrsScheme::TdGroupsEnhanced: return waveform == WaveformKind::ScFdma;
    }
    return false;
}

PtrsConfig PtrsConfig::distributed(int prb_spacing, int symbol_spacing) {
    PtrsConfig c;
    c.scheme = PtrsScheme::DistributedFd;
    c.fd_prb_spacing = prb_spacing;
    c.fd_symbol_spacing = symbol_spacing;
    return c;
}

PtrsConfig PtrsConfig::block(int prbs, int half_width) {
    PtrsConfig c;
    c.scheme = PtrsScheme::BlockFd;
    c.block_prbs = prbs;
    c.ici_half_width = half_width;
    return c;
}

PtrsConfig PtrsConfig::td_groups(int groups, int per_group) {
    PtrsConfig c;
    c.scheme = PtrsScheme::TdGroups;
    c.groups = groups;
    c.subsymbols_per_group = per_group;
    return c;
}

PtrsConfig PtrsConfig::td_enhanced() {
    PtrsConfig c;
    c.scheme = PtrsScheme::TdGroupsEnhanced;
    c.groups = 12;
    c.subsymbols_per_group = 4;
    return c;
}

int PtrsLayout::count() const {
    int n = 0;
    for (const auto& p : positions) {
        n += static_cast<int>(p.size());
    }
    return n;
}

PtrsLayout ptrs_positions(const PtrsConfig& cfg, const Numerology& num) {
    PtrsLayout layout;
    layout.scheme = cfg.scheme;
    layout.positions.resize(static_cast<std::size_t>(num.symbols_per_slot));
    const int k_count = num.active_subcarriers;
    switch (cfg.scheme) {
        case PtrsScheme::None:
            break;
        case PtrsScheme::DistributedFd: {
            if (cfg.fd_prb_spacing != 2 && cfg.fd_prb_spacing != 4) {
                throw ConfigError("distributed PTRS: fd_prb_spacing must be 2 or 4");
            }
            if (cfg.fd_symbol_spacing != 1 && cfg.fd_symbol_spacing != 2 && cfg.fd_symbol_spacing != 4) {
                throw ConfigError("distributed PTRS: fd_symbol_spacing must be 1, 2 or 4");
            }
            for (int s = 0; s < num.symbols_per_slot; s += cfg.fd_symbol_spacing) {
                auto& row = layout.positions[static_cast<std::size_t>(s)];
                for (int prb = 0; prb < num.prb_count; prb += cfg.fd_prb_spacing) {
                    row.push_back(prb * kSubcarriersPerPrb);
                }
            }
            break;
        }
        case PtrsScheme::BlockFd: {
            if (cfg.block_prbs < 1 || cfg.block_prbs > num.prb_count) {
                throw ConfigError("block PTRS: block_prbs must lie in [1, prb_count]");
            }
            const int len = cfg.block_prbs * kSubcarriersPerPrb;
            if (cfg.ici_half_width < 0 || len - 2 * cfg.ici_half_width < 2 * cfg.ici_half_width + 1) {
                throw ConfigError("block PTRS: block too short for the ICI filter width");
            }
            const int start = ((num.prb_count - cfg.block_prbs) / 2) * kSubcarriersPerPrb;
            for (auto& row : layout.positions) {
                for (int k = 0; k < len; ++k) {
                    row.push_back(start + k);
                }
            }
            break;
        }
        case PtrsScheme::TdGroups:
        case PtrsScheme::TdGroupsEnhanced: {
            const bool enhanced = cfg.scheme == PtrsScheme::TdGroupsEnhanced;
            if (enhanced && cfg.groups != 12) {
                throw ConfigError("enhanced TD PTRS uses 12 groups");
            }
            if (!enhanced && cfg.groups != 2 && cfg.groups != 4 && cfg.groups != 8) {
                throw ConfigError("TD PTRS: groups must be 2, 4 or 8");
            }
            if (cfg.subsymbols_per_group != 2 && cfg.subsymbols_per_group != 4) {
                throw ConfigError("TD PTRS: subsymbols_per_group must be 2 or 4");
            }
            const int g = cfg.groups;
            const int size = cfg.subsymbols_per_group;
            if (g * size > k_count) {
                throw ConfigError("TD PTRS: pattern needs more sub-symbols than the allocation has");
            }
            std::vector<int> pattern;
            for (int i = 0; i < g; ++i) {
                const double centre = (i + 0.5) * static_cast<double>(k_count) / g;
                const int first = static_cast<int>(std::lround(centre - size / 2.0));
                if (first < 0 || first + size > k_count ||
                    (!pattern.empty() && first <= pattern.back())) {
                    throw ConfigError("TD PTRS: groups overlap or leave the symbol");
                }
                for (int j = 0; j < size; ++j) {
                    pattern.push_back(first + j);
                }
            }
            layout.time_domain = true;
            layout.group_size = size;
            for (auto& row : layout.positions) {
                row = pattern;
            }
            break;
        }
    }
    return layout;
}

double estimate_cpe(std::span<const cplx> rx, std::span<const cplx> tx) {
    if (rx.size() != tx.size() || rx.empty()) {
        throw InputError("estimate_cpe: need equally long, non-empty pilot sequences");
    }
    cplx acc{};
    for (std::size_t i = 0; i < rx.size(); ++i) {
        acc += rx[i] * std::conj(tx[i]);
    }
    if (std::abs(acc) == 0.0) {
        throw EstimationError("estimate_cpe: zero pilot correlation");
    }
    return std::arg(acc);
}

IciFilterEstimate IciFilterEstimate::identity(int half_width) {
    IciFilterEstimate e;
    e.half_width = half_width;
    e.taps.assign(static_cast<std::size_t>(2 * half_width + 1), cplx{});
    e.taps[static_cast<std::size_t>(half_width)] = 1.0;
    return e;
}

IciFilterEstimate estimate_ici(std::span<const cplx> rx, std::span<const cplx> tx, int half_width) {
    if (rx.size() != tx.size()) {
        throw InputError("estimate_ici: rx/tx block lengths differ");
    }
    if (half_width < 0) {
        throw InputError("estimate_ici: negative filter half width");
    }
    const int len = static_cast<int>(rx.size());
    const int unknowns = 2 * half_width + 1;
    const int rows = len - 2 * half_width;
    if (rows < unknowns) {
        throw EstimationError("estimate_ici: block too short for the filter width");
    }
    Eigen::MatrixXcd a(rows, unknowns);
    Eigen::VectorXcd b(rows);
    for (int r = 0; r < rows; ++r) {
        const int k = r + half_width;
        b(r) = rx[static_cast<std::size_t>(k)];
        for (int q = -half_width; q <= half_width; ++q) {
            a(r, q + half_width) = tx[static_cast<std::size_t>(k - q)];
        }
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(a);
    if (qr.rank() < unknowns) {
        throw EstimationError("estimate_ici: pilot matrix is rank deficient");
    }
    const Eigen::VectorXcd x = qr.solve(b);
    IciFilterEstimate est;
    est.half_width = half_width;
    est.taps.assign(x.data(), x.data() + unknowns);
    return est;
}

IciDerotation ici_derotation(const IciFilterEstimate& ici, int fft_size) {
    double energy = 0.0;
    for (const auto& t : ici.taps) {
        energy += std::norm(t);
    }
    IciDerotation d;
    d.phasors.assign(static_cast<std::size_t>(fft_size), cplx{1.0, 0.0});
    if (energy < 1e-12) {
        d.valid = false;
        return d;
    }
    for (int n = 0; n < fft_size; ++n) {
        cplx p{};
        for (int q = -ici.half_width; q <= ici.half_width; ++q) {
            p += ici.tap(q) * std::polar(1.0, 2.0 * std::numbers::pi * q * n / fft_size);
        }
        const double mag = std::abs(p);
        d.phasors[static_cast<std::size_t>(n)] = mag > 0.0 ? std::conj(p) / mag : cplx{1.0, 0.0};
    }
    return d;
}

CVector apply_derotation(std::span<const cplx> symbol, const IciDerotation& derot,
                         const Numerology& num) {
    if (static_cast<int>(symbol.size()) != num.active_subcarriers) {
        throw InputError("apply_derotation: symbol width does not match the numerology");
    }
    CVector out(symbol.begin(), symbol.end());
    if (!derot.valid) {
        return out;
    }
    const auto n = static_cast<std::size_t>(num.fft_size);
    CVector freq(n);
    CVector body(n);
    for (int k = 0; k < num.active_subcarriers; ++k) {
        freq[static_cast<std::size_t>(num.fft_bin(k))] = symbol[static_cast<std::size_t>(k)];
    }
    idft(freq, body);
    for (std::size_t i = 0; i < n; ++i) {
        body[i] *= derot.phasors[i];
    }
    dft(body, freq);
    for (int k = 0; k < num.active_subcarriers; ++k) {
        out[static_cast<std::size_t>(k)] = freq[static_cast<std::size_t>(num.fft_bin(k))];
    }
    return out;
}

IciCompensation compensate_ici(std::span<const cplx> symbol, const IciFilterEstimate& ici,
                               const Numerology& num) {
    const auto derot = ici_derotation(ici, num.fft_size);
    return {apply_derotation(symbol, derot, num), !derot.valid};
}

std::vector<double> track_pn_td(std::span<const cplx> rx_pilots, std::span<const cplx> tx_pilots,
                                std::span<const int> positions, int group_size, int m) {
    if (rx_pilots.size() != tx_pilots.size() || rx_pilots.size() != positions.size()) {
        throw InputError("track_pn_td: pilot and position counts differ");
    }
    if (group_size < 1 || positions.empty() || positions.size() % static_cast<std::size_t>(group_size) != 0) {
        throw InputError("track_pn_td: positions must form whole groups");
    }
    const std::size_t groups = positions.size() / static_cast<std::size_t>(group_size);
    std::vector<double> centre(groups);
    std::vector<double> phase(groups);
    for (std::size_t g = 0; g < groups; ++g) {
        const auto off = g * static_cast<std::size_t>(group_size);
        const auto gs = static_cast<std::size_t>(group_size);
        double c = 0.0;
        for (std::size_t i = 0; i < gs; ++i) {
            c += positions[off + i];
        }
        centre[g] = c / static_cast<double>(group_size);
        double ph = estimate_cpe(rx_pilots.subspan(off, gs), tx_pilots.subspan(off, gs));
        if (g > 0) {
            ph -= 2.0 * std::numbers::pi * std::round((ph - phase[g - 1]) / (2.0 * std::numbers::pi));
        }
        phase[g] = ph;
    }
    std::vector<double> track(static_cast<std::size_t>(m));
    std::size_t seg = 0;
    for (int j = 0; j < m; ++j) {
        const double x = j;
        if (groups == 1 || x <= centre.front()) {
            track[static_cast<std::size_t>(j)] = phase.front();
        } else if (x >= centre.back()) {
            track[static_cast<std::size_t>(j)] = phase.back();
        } else {
            while (x > centre[seg + 1]) {
                ++seg;
            }
            const double t = (x - centre[seg]) / (centre[seg + 1] - centre[seg]);
            track[static_cast<std::size_t>(j)] = phase[seg] + t * (phase[seg + 1] - phase[seg]);
        }
    }
    return track;
}

}  // namespace subthz

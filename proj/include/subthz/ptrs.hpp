#pragma once

#include <span>
#include <string>
#include <vector>

#include "subthz/numerology.hpp"
#include "subthz/types.hpp"
#include "subthz/waveform.hpp"

namespace subthz {

enum class PtrsScheme {
    None,
    DistributedFd,     // OFDM, one subcarrier every few PRBs (CPE only)
    BlockFd,           // OFDM, contiguous block per symbol (ICI filter)
    TdGroups,          // SC-FDMA, 2/4/8 groups of 2/4 sub-symbols
    TdGroupsEnhanced,  // SC-FDMA, 12 groups of 4 sub-symbols
};

std::string to_string(PtrsScheme scheme);
PtrsScheme parse_ptrs_scheme(const std::string& name);

/// Waveform a scheme belongs to; None fits either.
bool scheme_supports(PtrsScheme scheme, WaveformKind waveform);

struct PtrsConfig {
    PtrsScheme scheme = PtrsScheme::None;
    int fd_prb_spacing = 2;
    int fd_symbol_spacing = 1;
    int block_prbs = 4;
    int groups = 8;
    int subsymbols_per_group = 4;
    int ici_half_width = 4;

    static PtrsConfig distributed(int prb_spacing = 2, int symbol_spacing = 1);
    static PtrsConfig block(int prbs = 4, int half_width = 4);
    static PtrsConfig td_groups(int groups = 8, int per_group = 4);
    static PtrsConfig td_enhanced();
};

/// PTRS positions per symbol: subcarrier indices for the frequency-domain
/// schemes, sub-symbol indices for the time-domain ones. Pilots are carried
/// by layer 0 only.
struct PtrsLayout {
    PtrsScheme scheme = PtrsScheme::None;
    bool time_domain = false;
    int group_size = 1;
    std::vector<std::vector<int>> positions;

    const std::vector<int>& at(int symbol) const {
        return positions[static_cast<std::size_t>(symbol)];
    }
    int count() const;
};

/// Throws ConfigError when the pattern does not fit the allocation.
PtrsLayout ptrs_positions(const PtrsConfig& cfg, const Numerology& num);

/// Common phase error: angle of sum(rx * conj(tx)).
double estimate_cpe(std::span<const cplx> rx, std::span<const cplx> tx);

/// ICI filter taps for frequency offsets -Q..+Q (index q + Q).
struct IciFilterEstimate {
    int half_width = 0;
    CVector taps;

    cplx tap(int q) const { return taps[static_cast<std::size_t>(q + half_width)]; }
    static IciFilterEstimate identity(int half_width);
};

/// Least-squares fit of rx[k] = sum_q ici[q] tx[k-q] over the block
/// positions whose whole (2Q+1)-wide window lies inside the block.
/// `rx` and `tx` are the contiguous block values.
IciFilterEstimate estimate_ici(std::span<const cplx> rx, std::span<const cplx> tx, int half_width);

/// Unit phasors exp(-j*phi[n]) over one symbol body, phi being the phase of
/// sum_q ici[q] exp(j 2 pi q n / N). `valid` is false when the filter has
/// (near) zero energy and no derotation should be applied.
struct IciDerotation {
    CVector phasors;
    bool valid = true;
};
IciDerotation ici_derotation(const IciFilterEstimate& ici, int fft_size);

struct IciCompensation {
    CVector symbol;
    bool skipped = false;
};

/// Removes the estimated PN from one symbol of active-subcarrier values:
/// IDFT to the body, multiply by the derotation, DFT back.
IciCompensation compensate_ici(std::span<const cplx> symbol, const IciFilterEstimate& ici,
                               const Numerology& num);
CVector apply_derotation(std::span<const cplx> symbol, const IciDerotation& derot,
                         const Numerology& num);

/// Per-sub-symbol phase track for one SC-FDMA symbol. Pilots are grouped in
/// consecutive runs of `group_size`; each group yields a matched-correlation
/// phase at its centre, unwrapped against the previous group, linearly
/// interpolated between centres and held constant beyond the outer ones.
std::vector<double> track_pn_td(std::span<const cplx> rx_pilots, std::span<const cplx> tx_pilots,
                                std::span<const int> positions, int group_size, int m);

}  // namespace subthz

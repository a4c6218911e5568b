#pragma once

#include <cstdint>
#include <vector>

#include "subthz/channel.hpp"
#include "subthz/config.hpp"
#include "subthz/ldpc.hpp"
#include "subthz/phase_noise.hpp"
#include "subthz/ptrs.hpp"

namespace subthz {

/// Result of one simulated slot.
struct DropOutcome {
    bool block_error = true;
    bool parity_ok = false;
    bool crc_ok = false;
    /// CRC and parity passed but the payload differs from what was sent.
    bool undetected_error = false;
    /// An estimator or compensator failed; the block counts as an error.
    bool numerical_failure = false;
    bool delay_exceeds_cp = false;
    /// A block-PTRS ICI filter had no usable energy and was not applied.
    bool compensation_skipped = false;
    int decoder_iterations = 0;
    /// Mean squared error of the compensated data symbols against the
    /// transmitted ones (post-equalisation distortion, diagnostics only).
    double data_mse = 0.0;
    /// Residual distortion variance (beyond thermal noise) measured on the
    /// compensated PTRS and folded into the demapper SINR.
    double residual_variance = 0.0;
};

/// Precomputed slot layout, code and impairment models for one LinkConfig.
/// run_drop is const and thread-safe.
///
/// Per slot: payload + CRC -> LDPC -> QAM -> layer mapping (one codeword
/// over `rank` layers, power 1/rank each) -> PTRS on layer 0 (layer 1 muted
/// there) -> OFDM or DFT-spread OFDM -> transmit-side phase noise -> 2x2
/// channel -> receive-side phase noise (shared by both ports) -> AWGN ->
/// FFT -> genie MMSE -> phase-noise compensation -> max-log LLR -> decoder.
/// The demapper SINR is 1 / (1/SINR_mmse + r), r being the pilot error
/// variance left after compensation minus its thermal share, so residual
/// phase noise and ICI do not make the LLRs overconfident at high SNR.
class LinkSimulator {
public:
    explicit LinkSimulator(const LinkConfig& cfg);

    /// One slot at `snr_db`. The random streams derive from
    /// (master_seed, snr_index, drop_index) alone.
    DropOutcome run_drop(double snr_db, int snr_index, std::uint64_t drop_index) const;

    const LinkConfig& config() const { return cfg_; }
    const Numerology& numerology() const { return num_; }
    const PtrsLayout& ptrs_layout() const { return layout_; }
    const QcLdpcCode& code() const { return code_; }
    int data_res_per_layer() const { return data_res_; }
    int payload_bits() const;

private:
    LinkConfig cfg_;
    Numerology num_;
    PtrsLayout layout_;
    QcLdpcCode code_;
    ChannelProfile channel_;
    PnModel tx_pn_;
    PnModel rx_pn_;
    PnSynthesizer tx_pn_gen_;
    PnSynthesizer rx_pn_gen_;
    std::vector<std::vector<int>> data_positions_;  // per symbol, columns free of PTRS
    std::vector<CVector> pilots_;                   // per symbol, PTRS values
    int data_res_ = 0;
};

/// Convenience wrapper building a simulator for a single drop.
DropOutcome run_drop(const LinkConfig& cfg, double snr_db, int snr_index, std::uint64_t drop_index);

}  // namespace subthz

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "subthz/channel.hpp"
#include "subthz/ldpc.hpp"
#include "subthz/modulation.hpp"
#include "subthz/numerology.hpp"
#include "subthz/phase_noise.hpp"
#include "subthz/ptrs.hpp"
#include "subthz/waveform.hpp"

namespace subthz {

enum class LinkDirection { Downlink, Uplink };

struct PnSettings {
    bool enabled = true;
    double carrier_ghz = 90.0;
    std::string bs_profile = "bs";
    std::string ue_profile = "ue";
    /// Downlink puts the BS oscillator at the transmitter, uplink swaps them.
    LinkDirection direction = LinkDirection::Downlink;
};

struct ChannelSettings {
    std::string model = "cdl-e";  // "cdl-e" or "awgn"
    double rms_ds_ns = 10.0;
    double rician_k_db = 15.0;
    double ue_speed_kmh = 3.0;
    double xpr_db = 8.0;
};

struct SweepSettings {
    std::string config_id = "link";
    double snr_start_db = 0.0;
    double snr_stop_db = 20.0;
    double snr_step_db = 0.5;
    int min_blocks = 0;
    int max_blocks = 2000;
    int min_errors = 50;
    /// The grid ends once `stop_points` consecutive points fall below `stop_bler`.
    double stop_bler = 0.01;
    int stop_points = 2;
    std::uint64_t master_seed = 1;

    std::vector<double> snr_points() const;
};

/// Everything a link simulation needs. Defaults describe a 960 kHz, 180 PRB,
/// QPSK rank-1 SC-FDMA downlink at 90 GHz with enhanced TD PTRS.
struct LinkConfig {
    double scs_khz = 960.0;
    int prb_count = 0;  // 0 selects the largest allocation for the SCS
    WaveformKind waveform = WaveformKind::ScFdma;
    Modulation modulation = Modulation::Qpsk;
    int rank = 1;
    ChannelSettings channel;
    PnSettings pn;
    std::map<std::string, PnModel> pn_profiles = default_pn_profiles();
    PtrsConfig ptrs = PtrsConfig::td_enhanced();
    LdpcDecoderSettings fec;
    SweepSettings sweep;

    static std::map<std::string, PnModel> default_pn_profiles();

    Numerology numerology() const;
    ChannelProfile channel_profile() const;
    /// Oscillator models at the transmitter and receiver for the configured
    /// direction; ideal models when phase noise is disabled.
    PnModel tx_pn() const;
    PnModel rx_pn() const;
    double carrier_hz() const { return pn.carrier_ghz * 1e9; }
};

/// Parses INI text. Missing keys keep their defaults; unknown sections or
/// keys, malformed values and inconsistent settings throw ConfigError.
LinkConfig parse_config(const std::string& text);
LinkConfig load_config(const std::string& path);

/// Applies one "section.key=value" override (profile sections as
/// "pn_profile.NAME.key=value"). Call validate_config afterwards.
void apply_override(LinkConfig& cfg, const std::string& assignment);

/// Throws ConfigError describing the first inconsistency found.
void validate_config(const LinkConfig& cfg);

/// Canonical INI text; parse_config(serialize_config(c)) reproduces c.
std::string serialize_config(const LinkConfig& cfg);

}  // namespace subthz

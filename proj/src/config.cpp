#include "subthz/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "subthz/errors.hpp"

namespace subthz {
namespace {

constexpr std::string_view kProfilePrefix = "pn_profile.";

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    s = s.substr(first, last - first + 1);
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\''))) {
        s = s.substr(1, s.size() - 2);
    }
    return s;
}

[[noreturn]] void bad_value(const std::string& where, const std::string& value, const char* what) {
    throw ConfigError(where + ": '" + value + "' is not " + what);
}

double to_double(const std::string& where, const std::string& value) {
    double v = 0.0;
    const char* b = value.data();
    const char* e = b + value.size();
    if (b != e && *b == '+') ++b;
    const auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc{} || ptr != e) bad_value(where, value, "a number");
    return v;
}

long long to_int(const std::string& where, const std::string& value) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size()) bad_value(where, value, "an integer");
    return v;
}

int to_int32(const std::string& where, const std::string& value) {
    const auto v = to_int(where, value);
    if (v < -2147483647LL || v > 2147483647LL) bad_value(where, value, "a 32-bit integer");
    return static_cast<int>(v);
}

std::uint64_t to_u64(const std::string& where, const std::string& value) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size()) bad_value(where, value, "an unsigned integer");
    return v;
}

bool to_bool(const std::string& where, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    bad_value(where, value, "a boolean");
}

std::vector<double> to_list(const std::string& where, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(to_double(where, item));
    }
    return out;
}

std::string fmt(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string fmt_list(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += fmt(v[i]);
    }
    return s;
}

std::vector<PsdCorner> make_corners(const std::vector<double>& hz, const std::vector<double>& slopes,
                                    const std::string& where) {
    if (!slopes.empty() && slopes.size() != hz.size()) {
        throw ConfigError(where + ": corner and slope lists differ in length");
    }
    std::vector<PsdCorner> out;
    for (std::size_t i = 0; i < hz.size(); ++i) {
        out.push_back({hz[i], slopes.empty() ? 2.0 : slopes[i]});
    }
    return out;
}

void set_profile_value(LinkConfig& cfg, const std::string& name, const std::string& key,
                       const std::string& value) {
    const std::string where = std::string(kProfilePrefix) + name + "." + key;
    if (name.empty()) throw ConfigError("phase-noise profile without a name");
    auto [it, inserted] = cfg.pn_profiles.try_emplace(name);
    PnModel& m = it->second;
    if (inserted) {
        m.name = name;
        m.psd0_dbc_hz = -std::numeric_limits<double>::infinity();
    }
    auto hz = [](const std::vector<PsdCorner>& c) {
        std::vector<double> v;
        for (const auto& x : c) v.push_back(x.corner_hz);
        return v;
    };
    auto slopes = [](const std::vector<PsdCorner>& c) {
        std::vector<double> v;
        for (const auto& x : c) v.push_back(x.slope);
        return v;
    };
    if (key == "psd0_dbc_hz") {
        m.psd0_dbc_hz = to_double(where, value);
    } else if (key == "ref_carrier_ghz") {
        m.ref_carrier_hz = to_double(where, value) * 1e9;
    } else if (key == "zeros_hz") {
        const auto s = slopes(m.zeros);
        const auto h = to_list(where, value);
        m.zeros = make_corners(h, s.size() == h.size() ? s : std::vector<double>{}, where);
    } else if (key == "zero_slopes") {
        m.zeros = make_corners(hz(m.zeros), to_list(where, value), where);
    } else if (key == "poles_hz") {
        const auto s = slopes(m.poles);
        const auto h = to_list(where, value);
        m.poles = make_corners(h, s.size() == h.size() ? s : std::vector<double>{}, where);
    } else if (key == "pole_slopes") {
        m.poles = make_corners(hz(m.poles), to_list(where, value), where);
    } else if (key == "side") {
        if (value == "bs") m.side = OscillatorSide::Bs;
        else if (value == "ue") m.side = OscillatorSide::Ue;
        else bad_value(where, value, "'bs' or 'ue'");
    } else {
        throw ConfigError("unknown key '" + where + "'");
    }
}

void set_value(LinkConfig& cfg, const std::string& section, const std::string& key,
               const std::string& raw) {
    const std::string value = trim(raw);
    const std::string where = section + "." + key;
    auto unknown = [&]() { throw ConfigError("unknown key '" + where + "'"); };
    if (section.rfind(kProfilePrefix, 0) == 0) {
        set_profile_value(cfg, section.substr(kProfilePrefix.size()), key, value);
    } else if (section == "numerology") {
        if (key == "scs_khz") cfg.scs_khz = to_double(where, value);
        else if (key == "prb_count") cfg.prb_count = to_int32(where, value);
        else unknown();
    } else if (section == "waveform") {
        try {
            if (key == "waveform") cfg.waveform = parse_waveform(value);
            else if (key == "modulation") cfg.modulation = parse_modulation(value);
            else if (key == "rank") cfg.rank = to_int32(where, value);
            else unknown();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(where + ": " + e.what());
        }
    } else if (section == "channel") {
        auto& c = cfg.channel;
        if (key == "channel") c.model = value;
        else if (key == "rms_ds_ns") c.rms_ds_ns = to_double(where, value);
        else if (key == "rician_k_db") c.rician_k_db = to_double(where, value);
        else if (key == "ue_speed_kmh") c.ue_speed_kmh = to_double(where, value);
        else if (key == "xpr_db") c.xpr_db = to_double(where, value);
        else unknown();
    } else if (section == "pn") {
        auto& p = cfg.pn;
        if (key == "enabled") p.enabled = to_bool(where, value);
        else if (key == "carrier_ghz") p.carrier_ghz = to_double(where, value);
        else if (key == "bs_profile") p.bs_profile = value;
        else if (key == "ue_profile") p.ue_profile = value;
        else if (key == "direction") {
            if (value == "downlink") p.direction = LinkDirection::Downlink;
            else if (value == "uplink") p.direction = LinkDirection::Uplink;
            else bad_value(where, value, "'downlink' or 'uplink'");
        } else unknown();
    } else if (section == "ptrs") {
        auto& p = cfg.ptrs;
        if (key == "scheme") p.scheme = parse_ptrs_scheme(value);
        else if (key == "fd_prb_spacing") p.fd_prb_spacing = to_int32(where, value);
        else if (key == "fd_symbol_spacing") p.fd_symbol_spacing = to_int32(where, value);
        else if (key == "block_prbs") p.block_prbs = to_int32(where, value);
        else if (key == "groups") p.groups = to_int32(where, value);
        else if (key == "subsymbols_per_group") p.subsymbols_per_group = to_int32(where, value);
        else if (key == "ici_half_width") p.ici_half_width = to_int32(where, value);
        else unknown();
    } else if (section == "fec") {
        if (key == "max_decoder_iters") cfg.fec.max_iterations = to_int32(where, value);
        else if (key == "normalization") cfg.fec.normalization = static_cast<float>(to_double(where, value));
        else unknown();
    } else if (section == "sweep") {
        auto& s = cfg.sweep;
        if (key == "config_id") s.config_id = value;
        else if (key == "snr_start_db") s.snr_start_db = to_double(where, value);
        else if (key == "snr_stop_db") s.snr_stop_db = to_double(where, value);
        else if (key == "snr_step_db") s.snr_step_db = to_double(where, value);
        else if (key == "min_blocks") s.min_blocks = to_int32(where, value);
        else if (key == "max_blocks") s.max_blocks = to_int32(where, value);
        else if (key == "min_errors") s.min_errors = to_int32(where, value);
        else if (key == "stop_bler") s.stop_bler = to_double(where, value);
        else if (key == "stop_points") s.stop_points = to_int32(where, value);
        else if (key == "master_seed") s.master_seed = to_u64(where, value);
        else unknown();
    } else {
        throw ConfigError("unknown section '" + section + "'");
    }
}

const PnModel& find_profile(const LinkConfig& cfg, const std::string& name) {
    const auto it = cfg.pn_profiles.find(name);
    if (it == cfg.pn_profiles.end()) {
        throw ConfigError("phase-noise profile '" + name + "' is not defined");
    }
    return it->second;
}

}  // namespace

std::vector<double> SweepSettings::snr_points() const {
    std::vector<double> pts;
    if (!(snr_step_db > 0.0)) return pts;
    const auto n = static_cast<long>(std::floor((snr_stop_db - snr_start_db) / snr_step_db + 1e-9));
    for (long i = 0; i <= n; ++i) {
        pts.push_back(snr_start_db + static_cast<double>(i) * snr_step_db);
    }
    return pts;
}

std::map<std::string, PnModel> LinkConfig::default_pn_profiles() {
    std::map<std::string, PnModel> m;
    m.emplace("bs", bs_pn_model());
    m.emplace("ue", ue_pn_model());
    m.emplace("off", ideal_pn_model());
    return m;
}

Numerology LinkConfig::numerology() const {
    const double scs = scs_khz * 1e3;
    if (!is_supported_scs(scs)) {
        throw ConfigError("numerology.scs_khz: " + fmt(scs_khz) + " kHz is not supported");
    }
    return derive_numerology(scs, prb_count > 0 ? prb_count : max_prbs(scs));
}

ChannelProfile LinkConfig::channel_profile() const {
    if (channel.model == "awgn") {
        return awgn_profile();
    }
    if (channel.model == "cdl-e") {
        return cdl_e_profile(channel.rms_ds_ns * 1e-9, channel.rician_k_db, channel.ue_speed_kmh / 3.6,
                             carrier_hz(), channel.xpr_db);
    }
    throw ConfigError("channel.channel: unknown model '" + channel.model + "'");
}

PnModel LinkConfig::tx_pn() const {
    if (!pn.enabled) return ideal_pn_model();
    return find_profile(*this, pn.direction == LinkDirection::Downlink ? pn.bs_profile : pn.ue_profile);
}

PnModel LinkConfig::rx_pn() const {
    if (!pn.enabled) return ideal_pn_model();
    return find_profile(*this, pn.direction == LinkDirection::Downlink ? pn.ue_profile : pn.bs_profile);
}

LinkConfig parse_config(const std::string& text) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    LinkConfig cfg;
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty()) {
            throw ConfigError("key '" + section + "' outside any section");
        }
        for (const auto& [key, node] : body) {
            set_value(cfg, section, key, node.data());
        }
    }
    validate_config(cfg);
    return cfg;
}

LinkConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        throw ConfigError("cannot read config file '" + path + "'");
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

void apply_override(LinkConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
        throw ConfigError("override '" + assignment + "' is not section.key=value");
    }
    const std::string path = trim(assignment.substr(0, eq));
    const auto dot = path.rfind('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == path.size()) {
        throw ConfigError("override '" + assignment + "' is not section.key=value");
    }
    set_value(cfg, path.substr(0, dot), path.substr(dot + 1), assignment.substr(eq + 1));
}

void validate_config(const LinkConfig& cfg) {
    const Numerology num = cfg.numerology();
    if (cfg.rank != 1 && cfg.rank != 2) {
        throw ConfigError("waveform.rank must be 1 or 2");
    }
    if (!scheme_supports(cfg.ptrs.scheme, cfg.waveform)) {
        throw ConfigError("ptrs.scheme '" + to_string(cfg.ptrs.scheme) + "' does not apply to " +
                          to_string(cfg.waveform));
    }
    (void)ptrs_positions(cfg.ptrs, num);
    if (cfg.ptrs.scheme == PtrsScheme::BlockFd && cfg.ptrs.ici_half_width > 16) {
        throw ConfigError("ptrs.ici_half_width must not exceed 16");
    }
    const auto& ch = cfg.channel;
    if (ch.model != "cdl-e" && ch.model != "awgn") {
        throw ConfigError("channel.channel must be 'cdl-e' or 'awgn'");
    }
    if (!(ch.rms_ds_ns >= 0.0) || !(ch.ue_speed_kmh >= 0.0) || !std::isfinite(ch.rician_k_db) ||
        !std::isfinite(ch.xpr_db)) {
        throw ConfigError("channel: delay spread and speed must be non-negative, K and XPR finite");
    }
    if (!(cfg.pn.carrier_ghz > 0.0)) {
        throw ConfigError("pn.carrier_ghz must be positive");
    }
    for (const auto& [name, m] : cfg.pn_profiles) {
        if (!(m.ref_carrier_hz > 0.0) || std::isnan(m.psd0_dbc_hz) || m.psd0_dbc_hz == HUGE_VAL) {
            throw ConfigError("pn_profile." + name + ": needs a finite psd0 and positive reference carrier");
        }
        for (const auto* list : {&m.poles, &m.zeros}) {
            for (const auto& c : *list) {
                if (!(c.corner_hz > 0.0) || !(c.slope > 0.0)) {
                    throw ConfigError("pn_profile." + name + ": corners and slopes must be positive");
                }
            }
        }
    }
    (void)find_profile(cfg, cfg.pn.bs_profile);
    (void)find_profile(cfg, cfg.pn.ue_profile);
    if (cfg.fec.max_iterations < 1 || !(cfg.fec.normalization > 0.0f && cfg.fec.normalization <= 1.0f)) {
        throw ConfigError("fec: max_decoder_iters >= 1 and normalization in (0, 1] required");
    }
    const auto& s = cfg.sweep;
    if (!(s.snr_step_db > 0.0)) throw ConfigError("sweep.snr_step_db must be positive");
    if (!(s.snr_stop_db >= s.snr_start_db)) throw ConfigError("sweep.snr_stop_db below snr_start_db");
    if (s.snr_points().size() > 1000) throw ConfigError("sweep: more than 1000 SNR points");
    if (s.max_blocks < 1) throw ConfigError("sweep.max_blocks must be at least 1");
    if (s.min_blocks < 0 || s.min_blocks > s.max_blocks) {
        throw ConfigError("sweep.min_blocks must lie in [0, max_blocks]");
    }
    if (s.min_errors < 20) throw ConfigError("sweep.min_errors must be at least 20");
    if (!(s.stop_bler > 0.0 && s.stop_bler < 1.0)) throw ConfigError("sweep.stop_bler must lie in (0, 1)");
    if (s.stop_points < 1) throw ConfigError("sweep.stop_points must be at least 1");
    if (s.config_id.empty() || s.config_id.find_first_of(",\"\n") != std::string::npos) {
        throw ConfigError("sweep.config_id must be non-empty without commas or quotes");
    }
}

std::string serialize_config(const LinkConfig& cfg) {
    std::ostringstream o;
    o << "[numerology]\n"
      << "scs_khz = " << fmt(cfg.scs_khz) << "\n"
      << "prb_count = " << cfg.prb_count << "\n\n"
      << "[waveform]\n"
      << "waveform = " << to_string(cfg.waveform) << "\n"
      << "modulation = " << to_string(cfg.modulation) << "\n"
      << "rank = " << cfg.rank << "\n\n"
      << "[channel]\n"
      << "channel = " << cfg.channel.model << "\n"
      << "rms_ds_ns = " << fmt(cfg.channel.rms_ds_ns) << "\n"
      << "rician_k_db = " << fmt(cfg.channel.rician_k_db) << "\n"
      << "ue_speed_kmh = " << fmt(cfg.channel.ue_speed_kmh) << "\n"
      << "xpr_db = " << fmt(cfg.channel.xpr_db) << "\n\n"
      << "[pn]\n"
      << "enabled = " << (cfg.pn.enabled ? "true" : "false") << "\n"
      << "carrier_ghz = " << fmt(cfg.pn.carrier_ghz) << "\n"
      << "bs_profile = " << cfg.pn.bs_profile << "\n"
      << "ue_profile = " << cfg.pn.ue_profile << "\n"
      << "direction = " << (cfg.pn.direction == LinkDirection::Downlink ? "downlink" : "uplink") << "\n\n"
      << "[ptrs]\n"
      << "scheme = " << to_string(cfg.ptrs.scheme) << "\n"
      << "fd_prb_spacing = " << cfg.ptrs.fd_prb_spacing << "\n"
      << "fd_symbol_spacing = " << cfg.ptrs.fd_symbol_spacing << "\n"
      << "block_prbs = " << cfg.ptrs.block_prbs << "\n"
      << "groups = " << cfg.ptrs.groups << "\n"
      << "subsymbols_per_group = " << cfg.ptrs.subsymbols_per_group << "\n"
      << "ici_half_width = " << cfg.ptrs.ici_half_width << "\n\n"
      << "[fec]\n"
      << "max_decoder_iters = " << cfg.fec.max_iterations << "\n"
      << "normalization = " << fmt(static_cast<double>(cfg.fec.normalization)) << "\n\n"
      << "[sweep]\n"
      << "config_id = " << cfg.sweep.config_id << "\n"
      << "snr_start_db = " << fmt(cfg.sweep.snr_start_db) << "\n"
      << "snr_stop_db = " << fmt(cfg.sweep.snr_stop_db) << "\n"
      << "snr_step_db = " << fmt(cfg.sweep.snr_step_db) << "\n"
      << "min_blocks = " << cfg.sweep.min_blocks << "\n"
      << "max_blocks = " << cfg.sweep.max_blocks << "\n"
      << "min_errors = " << cfg.sweep.min_errors << "\n"
      << "stop_bler = " << fmt(cfg.sweep.stop_bler) << "\n"
      << "stop_points = " << cfg.sweep.stop_points << "\n"
      << "master_seed = " << cfg.sweep.master_seed << "\n";
    for (const auto& [name, m] : cfg.pn_profiles) {
        if (m.is_ideal()) continue;
        auto hz = [](const std::vector<PsdCorner>& c, bool slope) {
            std::vector<double> v;
            for (const auto& x : c) v.push_back(slope ? x.slope : x.corner_hz);
            return v;
        };
        o << "\n[" << kProfilePrefix << name << "]\n"
          << "psd0_dbc_hz = " << fmt(m.psd0_dbc_hz) << "\n"
          << "ref_carrier_ghz = " << fmt(m.ref_carrier_hz / 1e9) << "\n"
          << "zeros_hz = " << fmt_list(hz(m.zeros, false)) << "\n"
          << "zero_slopes = " << fmt_list(hz(m.zeros, true)) << "\n"
          << "poles_hz = " << fmt_list(hz(m.poles, false)) << "\n"
          << "pole_slopes = " << fmt_list(hz(m.poles, true)) << "\n"
          << "side = " << (m.side == OscillatorSide::Bs ? "bs" : "ue") << "\n";
    }
    return o.str();
}

}  // namespace subthz
